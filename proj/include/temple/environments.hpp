#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "temple/mdp.hpp"
#include "temple/templates.hpp"

namespace temple {

/// A slippery gridworld. Each cell carries a landform, i.e. a slipping
/// probability: an intended move succeeds with probability 1 - slip and
/// deflects to each of the two perpendicular moves with probability slip/2
/// (for diagonal moves, to the two adjacent diagonals). Moves into a wall
/// leave the agent in place. The goal cell, when present, is absorbing.
struct LandformMaze {
    int width = 4;
    int height = 4;
    std::vector<double> slip;  // per cell, row-major, in [0,1)
    int goal = -1;             // cell index, -1 for no goal
    double goal_reward = 1.0;
    double step_cost = 0.2;
    int start = 0;             // start cell
    int num_actions = 4;       // 4 compass moves, or 8 with diagonals

    int num_cells() const { return width * height; }

    /// Rewards are stored normalized into [0,1]; this is the affine scale
    /// and offset mapping them back: unnormalized = r * scale() - offset().
    double reward_scale() const { return goal_reward + step_cost; }
    double reward_offset() const { return step_cost; }
};

/// Builds the maze's MDP. Rewards are mapped affinely into [0,1]: a regular
/// step (cost -step_cost) maps to 0 and the goal reward to 1. The start
/// distribution is one-hot at the start cell.
TabularMdp build_maze_mdp(const LandformMaze& maze, double discount);

/// Families of tasks the experiments draw from. Sampling is a pure function
/// of (parameters, seed, task index).
struct TaskDistribution {
    enum class Kind { FixedLandformSet, TwoGoal, GaussianMixture, VaryingSize };

    Kind kind = Kind::FixedLandformSet;
    std::uint64_t seed = 0;
    int width = 4;
    int height = 4;
    std::vector<double> landform_slips = {0.0, 0.2, 0.4};

    // TwoGoal: cells the goal alternates between; -1 picks defaults
    // (bottom-right and top-right corner).
    int goal_a = -1;
    int goal_b = -1;

    // GaussianMixture landforms.
    std::vector<double> mixture_means = {0.2, 0.4, 0.6};
    double mixture_std = 0.05;
    double mixture_clamp = 0.95;

    // VaryingSize schedule: tasks_per_size tasks at each size, in order.
    std::vector<int> sizes = {3, 4, 5, 6};
    int tasks_per_size = 20;

    int num_actions = 4;
    double goal_reward = 1.0;
    double step_cost = 0.2;
};

/// Deterministically samples the index-th task of the distribution.
LandformMaze sample_task(const TaskDistribution& dist, int index);

/// Enumerates the distinct transition templates of the maze's MDP by
/// sorting every state-action row and deduplicating. Oracle for
/// template-recovery tests.
std::vector<TransitionTemplate> ground_truth_templates(const LandformMaze& maze,
                                                       double discount);

/// Structured-text maze persistence: header line with the scalar fields,
/// then one line of slip values per grid row. Landform letters s/m/i are
/// accepted for slips 0/0.2/0.4 when loading.
void save_maze(const LandformMaze& maze, std::ostream& out);
LandformMaze load_maze(std::istream& in);

}  // namespace temple

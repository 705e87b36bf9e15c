#include "temple/environments.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace temple {

namespace {

// dx/dy per action: up, down, left, right, up-left, up-right, down-left,
// down-right. y grows downward.
constexpr std::array<int, 8> kDx = {0, 0, -1, 1, -1, 1, -1, 1};
constexpr std::array<int, 8> kDy = {-1, 1, 0, 0, -1, -1, 1, 1};

// Slip targets: cardinal moves deflect to the two perpendicular cardinals,
// diagonal moves to the two adjacent diagonals.
constexpr std::array<std::array<int, 2>, 8> kSlipTargets = {{
    {2, 3},  // up    -> left, right
    {2, 3},  // down  -> left, right
    {0, 1},  // left  -> up, down
    {0, 1},  // right -> up, down
    {5, 6},  // up-left    -> up-right, down-left
    {4, 7},  // up-right   -> up-left, down-right
    {4, 7},  // down-left  -> up-left, down-right
    {5, 6},  // down-right -> up-right, down-left
}};

void validate_maze(const LandformMaze& maze) {
    if (maze.width <= 0 || maze.height <= 0)
        throw std::invalid_argument("LandformMaze: non-positive dimensions");
    if (maze.slip.size() != static_cast<std::size_t>(maze.num_cells()))
        throw std::invalid_argument("LandformMaze: slip table has wrong size");
    for (double p : maze.slip)
        if (p < 0.0 || p >= 1.0)
            throw std::invalid_argument("LandformMaze: slip outside [0,1)");
    if (maze.goal >= maze.num_cells())
        throw std::invalid_argument("LandformMaze: goal outside grid");
    if (maze.start < 0 || maze.start >= maze.num_cells())
        throw std::invalid_argument("LandformMaze: start outside grid");
    if (maze.num_actions != 4 && maze.num_actions != 8)
        throw std::invalid_argument("LandformMaze: action set must be 4 or 8 moves");
    if (maze.goal >= 0 && maze.goal_reward + maze.step_cost <= 0.0)
        throw std::invalid_argument("LandformMaze: reward range is empty");
}

}  // namespace

TabularMdp build_maze_mdp(const LandformMaze& maze, double discount) {
    validate_maze(maze);
    const int w = maze.width;
    const int h = maze.height;
    const int S = maze.num_cells();
    const int A = maze.num_actions;

    const double scale = maze.reward_scale();
    const double step_reward = scale > 0.0 ? 0.0 : 0.0;  // -step_cost maps to 0
    const double goal_reward = scale > 0.0 ? 1.0 : 0.0;

    std::vector<double> transition(static_cast<std::size_t>(S) * A * S, 0.0);
    std::vector<double> reward(static_cast<std::size_t>(S) * A, step_reward);
    auto row = [&](int s, int a) {
        return transition.data() + (static_cast<std::size_t>(s) * A + a) * S;
    };
    auto move = [&](int x, int y, int action) {
        const int nx = x + kDx[action];
        const int ny = y + kDy[action];
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) return y * w + x;  // wall: stay
        return ny * w + nx;
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int s = y * w + x;
            for (int a = 0; a < A; ++a) {
                if (s == maze.goal) {
                    row(s, a)[s] = 1.0;
                    reward[static_cast<std::size_t>(s) * A + a] = goal_reward;
                    continue;
                }
                const double slip = maze.slip[s];
                row(s, a)[move(x, y, a)] += 1.0 - slip;
                row(s, a)[move(x, y, kSlipTargets[a][0])] += slip / 2.0;
                row(s, a)[move(x, y, kSlipTargets[a][1])] += slip / 2.0;
            }
        }
    }

    std::vector<double> start(S, 0.0);
    start[maze.start] = 1.0;
    return TabularMdp(S, A, std::move(transition), std::move(reward), std::move(start),
                      discount);
}

LandformMaze sample_task(const TaskDistribution& dist, int index) {
    if (index < 0) throw std::invalid_argument("sample_task: negative index");

    constexpr std::uint64_t kTaskStream = 11;
    constexpr std::uint64_t kLandformStream = 12;
    Rng task_rng = Rng(dist.seed).sub(kTaskStream).sub(static_cast<std::uint64_t>(index));

    LandformMaze maze;
    maze.width = dist.width;
    maze.height = dist.height;
    maze.num_actions = dist.num_actions;
    maze.goal_reward = dist.goal_reward;
    maze.step_cost = dist.step_cost;

    switch (dist.kind) {
        case TaskDistribution::Kind::FixedLandformSet: {
            maze.slip.resize(maze.num_cells());
            for (double& s : maze.slip)
                s = dist.landform_slips[task_rng.below(dist.landform_slips.size())];
            maze.goal = maze.num_cells() - 1;
            break;
        }
        case TaskDistribution::Kind::TwoGoal: {
            // Landforms are shared by every task of the家 distribution: only
            // the goal cell varies between the two underlying models.
            Rng land_rng = Rng(dist.seed).sub(kLandformStream);
            maze.slip.resize(maze.num_cells());
            for (double& s : maze.slip)
                s = dist.landform_slips[land_rng.below(dist.landform_slips.size())];
            const int goal_a = dist.goal_a >= 0 ? dist.goal_a : maze.num_cells() - 1;
            const int goal_b = dist.goal_b >= 0 ? dist.goal_b : maze.width - 1;
            maze.goal = task_rng.below(2) == 0 ? goal_a : goal_b;
            break;
        }
        case TaskDistribution::Kind::GaussianMixture: {
            maze.slip.resize(maze.num_cells());
            for (double& s : maze.slip) {
                const double mean =
                    dist.mixture_means[task_rng.below(dist.mixture_means.size())];
                const double draw = mean + dist.mixture_std * task_rng.gaussian();
                s = std::clamp(draw, 0.0, dist.mixture_clamp);
            }
            maze.goal = maze.num_cells() - 1;
            break;
        }
        case TaskDistribution::Kind::VaryingSize: {
            const int block = std::min(index / dist.tasks_per_size,
                                       static_cast<int>(dist.sizes.size()) - 1);
            maze.width = dist.sizes[block];
            maze.height = dist.sizes[block];
            maze.slip.resize(maze.num_cells());
            for (double& s : maze.slip)
                s = dist.landform_slips[task_rng.below(dist.landform_slips.size())];
            maze.goal = maze.num_cells() - 1;
            break;
        }
    }
    return maze;
}

std::vector<TransitionTemplate> ground_truth_templates(const LandformMaze& maze,
                                                       double discount) {
    const TabularMdp mdp = build_maze_mdp(maze, discount);
    std::vector<TransitionTemplate> out;
    for (int s = 0; s < mdp.num_states(); ++s) {
        for (int a = 0; a < mdp.num_actions(); ++a) {
            const SaDynamics dyn = sa_dynamics(mdp, s, a);
            TransitionTemplate t;
            t.probs = dyn.probs;
            std::sort(t.probs.begin(), t.probs.end(), std::greater<>());
            while (!t.probs.empty() && t.probs.back() == 0.0) t.probs.pop_back();
            t.reward = dyn.reward;
            bool known = false;
            for (const TransitionTemplate& seen : out)
                if (tt_distance(seen, t) < 1e-9) {
                    known = true;
                    break;
                }
            if (!known) out.push_back(std::move(t));
        }
    }
    return out;
}

void save_maze(const LandformMaze& maze, std::ostream& out) {
    out.precision(17);
    out << maze.width << ' ' << maze.height << ' ' << maze.num_actions << ' '
        << maze.goal << ' ' << maze.start << ' ' << maze.goal_reward << ' '
        << maze.step_cost << '\n';
    for (int y = 0; y < maze.height; ++y) {
        for (int x = 0; x < maze.width; ++x) {
            if (x) out << ' ';
            out << maze.slip[y * maze.width + x];
        }
        out << '\n';
    }
}

LandformMaze load_maze(std::istream& in) {
    LandformMaze maze;
    if (!(in >> maze.width >> maze.height >> maze.num_actions >> maze.goal >>
          maze.start >> maze.goal_reward >> maze.step_cost))
        throw std::runtime_error("load_maze: bad header");
    maze.slip.resize(static_cast<std::size_t>(maze.width) * maze.height);
    for (double& s : maze.slip) {
        std::string tok;
        if (!(in >> tok)) throw std::runtime_error("load_maze: truncated grid");
        if (tok == "s")
            s = 0.0;
        else if (tok == "m")
            s = 0.2;
        else if (tok == "i")
            s = 0.4;
        else
            s = std::stod(tok);
    }
    validate_maze(maze);
    return maze;
}

}  // namespace temple

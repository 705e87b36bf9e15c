#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "temple/rng.hpp"

namespace temple {

/// Deterministic greedy policy: one action index per state.
struct Policy {
    std::vector<int> action_of;

    bool operator==(const Policy&) const = default;
};

/// Transition dynamics of a single state-action pair: the next-state
/// distribution with the expected immediate reward appended.
struct SaDynamics {
    std::vector<double> probs;
    double reward = 0.0;
};

struct TransitionStep {
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next_state = 0;
};

/// One simulated episode plus its returns.
struct EpisodeTrace {
    std::vector<TransitionStep> steps;
    double discounted_return = 0.0;
    double undiscounted_return = 0.0;
};

/// Finite MDP with dense transition tensor and state-action rewards.
/// Construction validates that every transition row and the start
/// distribution are probability vectors (within 1e-9), rewards lie in [0,1]
/// and the discount in (0,1). Instances are immutable after construction.
class TabularMdp {
public:
    TabularMdp(int num_states, int num_actions,
               std::vector<double> transition,  // S*A*S, row-major
               std::vector<double> reward,      // S*A
               std::vector<double> start_dist,  // S
               double discount);

    int num_states() const { return S_; }
    int num_actions() const { return A_; }
    double discount() const { return discount_; }
    double vmax() const { return 1.0 / (1.0 - discount_); }

    double p(int s, int a, int s2) const { return transition_[(static_cast<std::size_t>(s) * A_ + a) * S_ + s2]; }
    double r(int s, int a) const { return reward_[static_cast<std::size_t>(s) * A_ + a]; }
    std::span<const double> row(int s, int a) const {
        return {transition_.data() + (static_cast<std::size_t>(s) * A_ + a) * S_,
                static_cast<std::size_t>(S_)};
    }
    std::span<const double> start_dist() const { return start_dist_; }

private:
    int S_;
    int A_;
    std::vector<double> transition_;
    std::vector<double> reward_;
    std::vector<double> start_dist_;
    double discount_;
};

/// Thrown when value iteration fails to reach the requested residual.
class ValueIterationError : public std::runtime_error {
public:
    ValueIterationError(std::string msg, double residual)
        : std::runtime_error(std::move(msg)), last_residual(residual) {}
    double last_residual;
};

struct ValueIterationResult {
    std::vector<double> values;
    Policy policy;
    int iterations = 0;
    double residual = 0.0;
};

/// Bellman optimality iteration until the sup-norm residual drops below
/// `tolerance`. The returned policy is greedy with respect to the values,
/// ties broken toward the lowest action index. An optional `warm_start`
/// (length S) seeds the iteration; starting from zero the iterates are
/// monotone non-decreasing.
ValueIterationResult value_iteration(const TabularMdp& mdp,
                                     double tolerance = 1e-6,
                                     int max_iters = 100000,
                                     std::span<const double> warm_start = {});

/// Exact value of a deterministic policy, solved as the linear Bellman
/// system (I - gamma P_pi) v = r_pi.
std::vector<double> policy_evaluation(const TabularMdp& mdp, const Policy& policy);

/// Samples one transition. Returns (next_state, reward).
std::pair<int, double> step(const TabularMdp& mdp, int state, int action, Rng& rng);

/// Extracts the transition row and reward of a pair.
SaDynamics sa_dynamics(const TabularMdp& mdp, int state, int action);

/// Samples a start state from the MDP's start distribution.
int sample_start(const TabularMdp& mdp, Rng& rng);

/// Rolls out `policy` for at most `step_cap` steps from a sampled start.
EpisodeTrace rollout(const TabularMdp& mdp, const Policy& policy, int step_cap, Rng& rng);

}  // namespace temple

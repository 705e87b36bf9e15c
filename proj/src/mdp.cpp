#include "temple/mdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace temple {

namespace {

constexpr double kProbSumTol = 1e-9;

void check_prob_vector(std::span<const double> v, const char* what) {
    double sum = 0.0;
    for (double x : v) {
        if (x < 0.0 || x > 1.0 + kProbSumTol)
            throw std::invalid_argument(std::string(what) + ": entry outside [0,1]");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
        throw std::invalid_argument(std::string(what) + ": does not sum to 1");
}

}  // namespace

TabularMdp::TabularMdp(int num_states, int num_actions,
                       std::vector<double> transition,
                       std::vector<double> reward,
                       std::vector<double> start_dist,
                       double discount)
    : S_(num_states),
      A_(num_actions),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      start_dist_(std::move(start_dist)),
      discount_(discount) {
    if (S_ <= 0 || A_ <= 0)
        throw std::invalid_argument("TabularMdp: state/action counts must be positive");
    if (transition_.size() != static_cast<std::size_t>(S_) * A_ * S_)
        throw std::invalid_argument("TabularMdp: transition tensor has wrong size");
    if (reward_.size() != static_cast<std::size_t>(S_) * A_)
        throw std::invalid_argument("TabularMdp: reward table has wrong size");
    if (start_dist_.size() != static_cast<std::size_t>(S_))
        throw std::invalid_argument("TabularMdp: start distribution has wrong size");
    if (!(discount_ > 0.0 && discount_ < 1.0))
        throw std::invalid_argument("TabularMdp: discount must lie in (0,1)");
    for (int s = 0; s < S_; ++s)
        for (int a = 0; a < A_; ++a)
            check_prob_vector(row(s, a), "TabularMdp: transition row");
    check_prob_vector(start_dist_, "TabularMdp: start distribution");
    for (double x : reward_)
        if (x < 0.0 || x > 1.0)
            throw std::invalid_argument("TabularMdp: reward outside [0,1]");
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double tolerance,
                                     int max_iters, std::span<const double> warm_start) {
    if (tolerance <= 0.0)
        throw std::invalid_argument("value_iteration: tolerance must be > 0");
    const int S = mdp.num_states();
    const int A = mdp.num_actions();

    std::vector<double> v(S, 0.0);
    if (!warm_start.empty()) {
        if (warm_start.size() != static_cast<std::size_t>(S))
            throw std::invalid_argument("value_iteration: warm start has wrong size");
        v.assign(warm_start.begin(), warm_start.end());
    }
    std::vector<double> next(S, 0.0);
    Policy policy;
    policy.action_of.assign(S, 0);

    double residual = 0.0;
    for (int iter = 1; iter <= max_iters; ++iter) {
        residual = 0.0;
        for (int s = 0; s < S; ++s) {
            double best = -1.0;
            int best_a = 0;
            for (int a = 0; a < A; ++a) {
                std::span<const double> p = mdp.row(s, a);
                double q = mdp.r(s, a);
                double future = 0.0;
                for (int s2 = 0; s2 < S; ++s2) future += p[s2] * v[s2];
                q += mdp.discount() * future;
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            next[s] = best;
            policy.action_of[s] = best_a;
            residual = std::max(residual, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (residual <= tolerance)
            return {std::move(v), std::move(policy), iter, residual};
    }
    throw ValueIterationError("value_iteration: no convergence after " +
                                  std::to_string(max_iters) +
                                  " iterations, residual " + std::to_string(residual),
                              residual);
}

std::vector<double> policy_evaluation(const TabularMdp& mdp, const Policy& policy) {
    const int S = mdp.num_states();
    if (policy.action_of.size() != static_cast<std::size_t>(S))
        throw std::invalid_argument("policy_evaluation: policy has wrong size");
    for (int a : policy.action_of)
        if (a < 0 || a >= mdp.num_actions())
            throw std::invalid_argument("policy_evaluation: action index out of range");

    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(S, S);
    Eigen::VectorXd b(S);
    for (int s = 0; s < S; ++s) {
        const int a = policy.action_of[s];
        std::span<const double> p = mdp.row(s, a);
        for (int s2 = 0; s2 < S; ++s2) m(s, s2) -= mdp.discount() * p[s2];
        b(s) = mdp.r(s, a);
    }
    Eigen::VectorXd v = m.partialPivLu().solve(b);
    return std::vector<double>(v.data(), v.data() + S);
}

std::pair<int, double> step(const TabularMdp& mdp, int state, int action, Rng& rng) {
    const int next = rng.categorical(mdp.row(state, action));
    return {next, mdp.r(state, action)};
}

SaDynamics sa_dynamics(const TabularMdp& mdp, int state, int action) {
    std::span<const double> p = mdp.row(state, action);
    return {std::vector<double>(p.begin(), p.end()), mdp.r(state, action)};
}

int sample_start(const TabularMdp& mdp, Rng& rng) {
    return rng.categorical(mdp.start_dist());
}

EpisodeTrace rollout(const TabularMdp& mdp, const Policy& policy, int step_cap, Rng& rng) {
    EpisodeTrace trace;
    trace.steps.reserve(step_cap);
    int s = sample_start(mdp, rng);
    double disc = 1.0;
    for (int t = 0; t < step_cap; ++t) {
        const int a = policy.action_of[s];
        auto [s2, r] = step(mdp, s, a, rng);
        trace.steps.push_back({s, a, r, s2});
        trace.discounted_return += disc * r;
        trace.undiscounted_return += r;
        disc *= mdp.discount();
        s = s2;
    }
    return trace;
}

}  // namespace temple

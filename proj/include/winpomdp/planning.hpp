#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "winpomdp/policy.hpp"
#include "winpomdp/pomdp.hpp"
#include "winpomdp/superstate.hpp"

namespace winpomdp {

/// Action-value iterate over (window, action).
struct QTable {
    std::shared_ptr<const WindowIndex> idx;
    std::vector<double> q; // [w][a]
    int iterations = 0;

    double at(std::int64_t w, int a) const {
        return q[static_cast<std::size_t>(w) * idx->n_actions() + a];
    }
};

/// All-zero QTable matching `idx` (the Q_0 of the learning algorithm).
QTable zero_q(std::shared_ptr<const WindowIndex> idx);

/// K synchronous Bellman-optimality backups
///   Q_k(w,a) = r(w,a) + gamma * sum_o P(next(w,a,o)|w,a) * max_a' Q_{k-1}(.)
/// on the model. Zero rows (unvisited pairs) contribute only their reward
/// term; unreachable windows are skipped. Successive iterates are checked for
/// gamma-contraction in sup norm (1e-12 cushion).
QTable value_iteration(const SuperstateModel& model, double gamma, int K, QTable q0);

/// Per-window argmax; ties break to the lowest action index.
WindowPolicy greedy(const QTable& q);

/// Exact value of `policy` on the superstate model, read off at the empty
/// window: solves v = r_pi + gamma P_pi v iteratively to sup-norm residual
/// 1e-12.
double superstate_policy_value(const SuperstateModel& model, const WindowPolicy& policy,
                               double gamma);

/// Exact POMDP value of a window policy: evaluates the product Markov chain
/// over (hidden state, window), which is Markov because the policy reads only
/// the window, to residual 1e-12 from the initial distribution mu x {empty}.
double pomdp_policy_value(const TabularPomdp& pomdp, const WindowPolicy& policy, double gamma);

/// Value iteration to sup-norm step tolerance tol * (1-gamma) / (2 gamma),
/// greedy extraction, and exact evaluation of the extracted policy. The
/// returned value is within tol of the optimal superstate value.
std::pair<double, WindowPolicy> optimal_superstate_value(const SuperstateModel& model,
                                                         double gamma, double tol);

/// Monte-Carlo estimate of a window policy's POMDP value from truncated
/// rollouts.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int episodes = 0;
    int horizon = 0;
};

/// Truncation horizon ceil(log(1e-4 * (1-gamma)) / log(gamma)), which caps
/// the tail below 1e-4 for rewards in [-1, 1].
int mc_horizon(double gamma);

McEstimate monte_carlo_policy_value(const TabularPomdp& pomdp, const WindowPolicy& policy,
                                    double gamma, int episodes, std::uint64_t seed);

/// CSV dumps: (window, action, q_value) and (window, chosen_action).
void dump_q_csv(const QTable& q, std::ostream& out);
void dump_policy_csv(const WindowPolicy& policy, std::ostream& out);

} // namespace winpomdp

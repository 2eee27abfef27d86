#include "winpomdp/planning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "winpomdp/errors.hpp"
#include "winpomdp/io.hpp"
#include "winpomdp/rng.hpp"
#include "winpomdp/trajectory.hpp"

namespace winpomdp {

namespace {

constexpr double kSolveResidual = 1e-12;
constexpr int kMaxSolveIters = 20'000'000;
constexpr std::int64_t kMaxProductStates = std::int64_t{1} << 27;

} // namespace

QTable zero_q(std::shared_ptr<const WindowIndex> idx) {
    QTable q;
    q.q.assign(static_cast<std::size_t>(idx->size()) * idx->n_actions(), 0.0);
    q.idx = std::move(idx);
    return q;
}

QTable value_iteration(const SuperstateModel& model, double gamma, int K, QTable q0) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ParameterError("value_iteration: gamma must lie in (0, 1)");
    if (K < 0) throw ParameterError("value_iteration: K must be >= 0");
    if (!q0.idx || q0.idx->size() != model.idx->size() ||
        q0.idx->n_actions() != model.idx->n_actions())
        throw ParameterError("value_iteration: q0 dimensions do not match the model");

    const WindowIndex& idx = *model.idx;
    const std::int64_t n = idx.size();
    const int A = idx.n_actions();
    const int O = idx.n_obs();

    QTable cur = std::move(q0);
    cur.idx = model.idx;
    std::vector<double> next(cur.q.size());
    std::vector<double> best(static_cast<std::size_t>(n), 0.0);
    double prev_delta = -1.0;
    for (int k = 0; k < K; ++k) {
        for (std::int64_t w = 0; w < n; ++w) {
            double b = cur.q[static_cast<std::size_t>(w) * A];
            for (int a = 1; a < A; ++a)
                b = std::max(b, cur.q[static_cast<std::size_t>(w) * A + a]);
            best[static_cast<std::size_t>(w)] = b;
        }
        double delta = 0.0;
        for (std::int64_t w = 0; w < n; ++w) {
            if (!model.is_reachable(w)) {
                for (int a = 0; a < A; ++a)
                    next[static_cast<std::size_t>(w) * A + a] =
                        cur.q[static_cast<std::size_t>(w) * A + a];
                continue;
            }
            for (int a = 0; a < A; ++a) {
                const std::size_t pair =
                    static_cast<std::size_t>(w) * A + static_cast<std::size_t>(a);
                double backup = 0.0;
                for (int o = 0; o < O; ++o) {
                    const double p = model.trans[pair * O + static_cast<std::size_t>(o)];
                    if (p != 0.0) backup += p * best[static_cast<std::size_t>(idx.next(w, a, o))];
                }
                const double v = model.reward[pair] + gamma * backup;
                next[pair] = v;
                delta = std::max(delta, std::abs(v - cur.q[pair]));
            }
        }
        cur.q.swap(next);
        ++cur.iterations;
        if (prev_delta >= 0.0 && delta > gamma * prev_delta + 1e-12)
            throw NumericError("value_iteration: contraction violated at iteration " +
                               std::to_string(k + 1) + " (delta " + std::to_string(delta) +
                               " > gamma * " + std::to_string(prev_delta) + ")");
        prev_delta = delta;
    }
    return cur;
}

WindowPolicy greedy(const QTable& q) {
    const WindowIndex& idx = *q.idx;
    const int A = idx.n_actions();
    WindowPolicy policy;
    policy.idx = q.idx;
    policy.actions.assign(static_cast<std::size_t>(idx.size()), 0);
    for (std::int64_t w = 0; w < idx.size(); ++w) {
        int arg = 0;
        double best = q.q[static_cast<std::size_t>(w) * A];
        for (int a = 1; a < A; ++a) {
            const double v = q.q[static_cast<std::size_t>(w) * A + a];
            if (v > best) {
                best = v;
                arg = a;
            }
        }
        policy.actions[static_cast<std::size_t>(w)] = arg;
    }
    return policy;
}

double superstate_policy_value(const SuperstateModel& model, const WindowPolicy& policy,
                               double gamma) {
    if (policy.idx->size() != model.idx->size() ||
        policy.idx->n_actions() != model.idx->n_actions())
        throw ParameterError("superstate_policy_value: policy does not share the model's index");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw ParameterError("superstate_policy_value: gamma must lie in [0, 1)");

    const WindowIndex& idx = *model.idx;
    const std::int64_t n = idx.size();
    const int O = idx.n_obs();

    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    std::vector<double> v2(static_cast<std::size_t>(n), 0.0);
    for (int iter = 0; iter < kMaxSolveIters; ++iter) {
        double delta = 0.0;
        for (std::int64_t w = 0; w < n; ++w) {
            if (!model.is_reachable(w)) continue;
            const int a = policy.action_at(w);
            const std::size_t pair =
                static_cast<std::size_t>(w) * idx.n_actions() + static_cast<std::size_t>(a);
            double backup = 0.0;
            for (int o = 0; o < O; ++o) {
                const double p = model.trans[pair * O + static_cast<std::size_t>(o)];
                if (p != 0.0) backup += p * v[static_cast<std::size_t>(idx.next(w, a, o))];
            }
            const double nv = model.reward[pair] + gamma * backup;
            v2[static_cast<std::size_t>(w)] = nv;
            delta = std::max(delta, std::abs(nv - v[static_cast<std::size_t>(w)]));
        }
        v.swap(v2);
        if (delta <= kSolveResidual) return v[0];
    }
    throw NumericError("superstate_policy_value: no convergence to residual 1e-12");
}

double pomdp_policy_value(const TabularPomdp& pomdp, const WindowPolicy& policy, double gamma) {
    if (policy.idx->n_actions() != pomdp.n_actions || policy.idx->n_obs() != pomdp.n_obs)
        throw ParameterError("pomdp_policy_value: policy alphabet does not match the POMDP");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw ParameterError("pomdp_policy_value: gamma must lie in [0, 1)");

    const WindowIndex& idx = *policy.idx;
    const std::int64_t nw = idx.size();
    const std::int64_t S = pomdp.n_states;
    if (S * nw > kMaxProductStates)
        throw CapacityError("pomdp_policy_value: product chain needs " + std::to_string(S * nw) +
                            " states, limit is " + std::to_string(kMaxProductStates));
    const int O = pomdp.n_obs;

    // Product-chain state (s, w); the policy reads only w, rewards read only
    // (last obs of w, action), so the pair is Markov.
    std::vector<double> v(static_cast<std::size_t>(S * nw), 0.0);
    std::vector<double> v2(v.size());
    std::vector<double> reward_w(static_cast<std::size_t>(nw), 0.0);
    for (std::int64_t w = 0; w < nw; ++w)
        if (idx.length(w) > 0)
            reward_w[static_cast<std::size_t>(w)] =
                pomdp.reward_at(idx.last_obs(w), policy.action_at(w));

    for (int iter = 0; iter < kMaxSolveIters; ++iter) {
        double delta = 0.0;
        for (std::int64_t w = 0; w < nw; ++w) {
            const int a = policy.action_at(w);
            for (int s = 0; s < pomdp.n_states; ++s) {
                double backup = 0.0;
                for (int o = 0; o < O; ++o) {
                    const double po = pomdp.obs_at(s, a, o);
                    if (po == 0.0) continue;
                    const std::int64_t w2 = idx.next(w, a, o);
                    double trans_part = 0.0;
                    for (int s2 = 0; s2 < pomdp.n_states; ++s2)
                        trans_part += pomdp.trans_at(s, a, s2) *
                                      v[static_cast<std::size_t>(s2 * nw + w2)];
                    backup += po * trans_part;
                }
                const double nv = reward_w[static_cast<std::size_t>(w)] + gamma * backup;
                const std::size_t i = static_cast<std::size_t>(s * nw + w);
                v2[i] = nv;
                delta = std::max(delta, std::abs(nv - v[i]));
            }
        }
        v.swap(v2);
        if (delta <= kSolveResidual) {
            double value = 0.0;
            for (int s = 0; s < pomdp.n_states; ++s)
                value += pomdp.init_dist[static_cast<std::size_t>(s)] *
                         v[static_cast<std::size_t>(s * nw)];
            return value;
        }
    }
    throw NumericError("pomdp_policy_value: no convergence to residual 1e-12");
}

std::pair<double, WindowPolicy> optimal_superstate_value(const SuperstateModel& model,
                                                         double gamma, double tol) {
    if (!(tol > 0.0)) throw ParameterError("optimal_superstate_value: tol must be positive");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ParameterError("optimal_superstate_value: gamma must lie in (0, 1)");

    const double step_tol = tol * (1.0 - gamma) / (2.0 * gamma);
    QTable q = zero_q(model.idx);
    // batches of backups until the sup-norm step is small enough
    constexpr int kBatch = 16;
    double prev_sup = -1.0;
    for (int iters = 0; iters < kMaxSolveIters; iters += kBatch) {
        const QTable next = value_iteration(model, gamma, kBatch, q);
        double step = 0.0;
        for (std::size_t i = 0; i < q.q.size(); ++i)
            step = std::max(step, std::abs(next.q[i] - q.q[i]));
        q = next;
        if (step <= step_tol) break;
        if (prev_sup >= 0.0 && step >= prev_sup && step > 0.0)
            throw NumericError("optimal_superstate_value: stalled contraction");
        prev_sup = step;
    }
    WindowPolicy policy = greedy(q);
    return {superstate_policy_value(model, policy, gamma), std::move(policy)};
}

int mc_horizon(double gamma) {
    return static_cast<int>(std::ceil(std::log(1e-4 * (1.0 - gamma)) / std::log(gamma)));
}

McEstimate monte_carlo_policy_value(const TabularPomdp& pomdp, const WindowPolicy& policy,
                                    double gamma, int episodes, std::uint64_t seed) {
    if (episodes < 2) throw ParameterError("monte_carlo_policy_value: need at least 2 episodes");
    McEstimate est;
    est.episodes = episodes;
    est.horizon = mc_horizon(gamma);
    const PolicySpec spec = PolicySpec::window(policy);
    double sum = 0.0, sum_sq = 0.0;
    for (int e = 0; e < episodes; ++e) {
        const Trajectory traj = sample_trajectory(
            pomdp, spec, est.horizon, Rng::derive(seed, {0x6d63ull, static_cast<std::uint64_t>(e)}));
        double ret = 0.0, disc = 1.0;
        for (int t = 0; t < traj.length(); ++t) {
            ret += disc * traj.rewards[static_cast<std::size_t>(t)];
            disc *= gamma;
        }
        sum += ret;
        sum_sq += ret * ret;
    }
    est.mean = sum / episodes;
    const double var = std::max(0.0, (sum_sq - sum * sum / episodes) / (episodes - 1));
    est.std_error = std::sqrt(var / episodes);
    return est;
}

void dump_q_csv(const QTable& q, std::ostream& out) {
    const WindowIndex& idx = *q.idx;
    out << "window,action,q_value\n";
    for (std::int64_t w = 0; w < idx.size(); ++w)
        for (int a = 0; a < idx.n_actions(); ++a)
            out << idx.to_text(w) << ',' << a << ',' << format_double(q.at(w, a)) << '\n';
}

void dump_policy_csv(const WindowPolicy& policy, std::ostream& out) {
    const WindowIndex& idx = *policy.idx;
    out << "window,chosen_action\n";
    for (std::int64_t w = 0; w < idx.size(); ++w)
        out << idx.to_text(w) << ',' << policy.action_at(w) << '\n';
}

} // namespace winpomdp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <span>
#include <sstream>

#include "winpomdp/errors.hpp"
#include "winpomdp/planning.hpp"
#include "winpomdp/pomdp.hpp"
#include "winpomdp/rng.hpp"
#include "winpomdp/superstate.hpp"

using namespace winpomdp;

namespace {

double sup_diff(const QTable& a, const QTable& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.q.size(); ++i) d = std::max(d, std::abs(a.q[i] - b.q[i]));
    return d;
}

QTable fixed_point(const SuperstateModel& model, double gamma) {
    QTable q = zero_q(model.idx);
    for (int i = 0; i < 100'000; ++i) {
        const QTable next = value_iteration(model, gamma, 1, q);
        if (sup_diff(next, q) <= 1e-12) return next;
        q = next;
    }
    throw NumericError("fixed_point: no convergence");
}

/// Superstate model with constant reward c on every pair, uniform rows.
SuperstateModel constant_reward_model(double c) {
    SuperstateModel model;
    model.idx = std::make_shared<const WindowIndex>(WindowIndex::build(2, 2, 1));
    model.kind = ModelKind::estimated;
    const std::int64_t n = model.idx->size();
    model.trans.assign(static_cast<std::size_t>(n) * 2 * 2, 0.5);
    model.reward.assign(static_cast<std::size_t>(n) * 2, c);
    model.reachable.assign(static_cast<std::size_t>(n), 1);
    model.visited.assign(static_cast<std::size_t>(n) * 2, 1);
    return model;
}

WindowPolicy random_policy(std::shared_ptr<const WindowIndex> idx, std::uint64_t seed) {
    Rng rng(seed);
    WindowPolicy policy;
    policy.actions.resize(static_cast<std::size_t>(idx->size()));
    for (auto& a : policy.actions) a = static_cast<std::int32_t>(rng.next_int(idx->n_actions()));
    policy.idx = std::move(idx);
    return policy;
}

/// Observations reveal the state exactly; transitions keep a positive floor.
TabularPomdp perfect_obs_pomdp(std::uint64_t seed) {
    TabularPomdp p = random_pomdp(3, 2, 3, 0.1, 0.0, seed);
    p.obs.assign(p.obs.size(), 0.0);
    for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 2; ++a)
            p.obs[(static_cast<std::size_t>(s) * 2 + a) * 3 + s] = 1.0;
    p.init_dist = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    return p;
}

} // namespace

TEST_CASE("K = 0 returns q0 unchanged") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    QTable q0 = zero_q(model.idx);
    q0.q[3] = 1.25;
    const QTable q = value_iteration(model, 0.95, 0, q0);
    CHECK(q.q == q0.q);
}

TEST_CASE("one backup from zero reproduces the reward table") {
    const SuperstateModel model = build_exact(probe_env(), 2);
    const QTable q = value_iteration(model, 0.95, 1, zero_q(model.idx));
    for (std::int64_t w = 0; w < model.n_windows(); ++w)
        for (int a = 0; a < 3; ++a) CHECK(q.at(w, a) == model.reward_at(w, a));
}

TEST_CASE("iterates contract at rate gamma and stay bounded") {
    const double gamma = 0.9;
    const SuperstateModel model = build_exact(probe_env(0.9), 2);
    QTable prev = zero_q(model.idx);
    QTable cur = value_iteration(model, gamma, 1, prev);
    double prev_delta = sup_diff(cur, prev);
    for (int k = 0; k < 60; ++k) {
        const QTable next = value_iteration(model, gamma, 1, cur);
        const double delta = sup_diff(next, cur);
        CHECK(delta <= gamma * prev_delta + 1e-12);
        for (double v : next.q) CHECK(std::abs(v) <= 1.0 / (1.0 - gamma) + 1e-9);
        prev = cur;
        cur = next;
        prev_delta = delta;
    }
}

TEST_CASE("K backups from zero land within gamma^K of the fixed point") {
    const double gamma = 0.95;
    const SuperstateModel model = build_exact(probe_env(), 1);
    const QTable q_fix = fixed_point(model, gamma);
    double q_fix_norm = 0.0;
    for (double v : q_fix.q) q_fix_norm = std::max(q_fix_norm, std::abs(v));
    for (int K : {5, 20, 60}) {
        const QTable q = value_iteration(model, gamma, K, zero_q(model.idx));
        CHECK(sup_diff(q, q_fix) <= std::pow(gamma, K) * q_fix_norm + 1e-9);
        // and the coarser 2 gamma^K / (1 - gamma) planning bound
        CHECK(sup_diff(q, q_fix) <= 2.0 * std::pow(gamma, K) / (1.0 - gamma) + 1e-9);
    }
}

TEST_CASE("greedy picks unique maximizers and breaks ties downward") {
    QTable q;
    q.idx = std::make_shared<const WindowIndex>(WindowIndex::build(3, 2, 1));
    q.q.assign(static_cast<std::size_t>(q.idx->size()) * 3, 0.0);
    q.q[0 * 3 + 2] = 5.0; // unique max at action 2 of window 0
    const WindowPolicy policy = greedy(q);
    CHECK(policy.action_at(0) == 2);
    for (std::int64_t w = 1; w < q.idx->size(); ++w) CHECK(policy.action_at(w) == 0); // all ties
}

TEST_CASE("greedy is invariant under constant shifts") {
    // random tables with well-separated entries; rows with sub-ulp gaps are
    // fp-degenerate and say nothing about the argmax rule
    Rng rng(2024);
    QTable q = zero_q(std::make_shared<const WindowIndex>(WindowIndex::build(3, 2, 2)));
    for (double& v : q.q) v = std::round(rng.next_double() * 1e6) / 1e3; // gaps >= 1e-3
    const WindowPolicy before = greedy(q);
    for (const double shift : {0.5, -3.25, 1024.0}) {
        QTable shifted = q;
        for (double& v : shifted.q) v += shift;
        CHECK(greedy(shifted).actions == before.actions);
    }
}

TEST_CASE("probe m = 1: the greedy action after a clean probe reading matches it") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    const QTable q = value_iteration(model, 0.95, 200, zero_q(model.idx));
    const WindowPolicy policy = greedy(q);
    const std::int64_t w_p_o1 = model.idx->encode({{0, 0}});
    const std::int64_t w_p_o2 = model.idx->encode({{0, 1}});
    CHECK(policy.action_at(w_p_o1) == 1); // a1 after observing o1
    CHECK(policy.action_at(w_p_o2) == 2); // a2 after observing o2
}

TEST_CASE("constant-reward model evaluates to c / (1 - gamma) everywhere") {
    const double c = 0.6, gamma = 0.9;
    const SuperstateModel model = constant_reward_model(c);
    for (std::uint64_t seed : {1ull, 2ull}) {
        const WindowPolicy policy = random_policy(model.idx, seed);
        CHECK(superstate_policy_value(model, policy, gamma) ==
              doctest::Approx(c / (1.0 - gamma)).epsilon(1e-10));
    }
}

TEST_CASE("gamma = 0 evaluates to the empty-window reward, which is zero") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    const WindowPolicy policy = random_policy(model.idx, 3);
    CHECK(superstate_policy_value(model, policy, 0.0) == 0.0);
}

TEST_CASE("superstate evaluation matches Monte-Carlo on the exact chain") {
    // simulate the superstate chain directly as the independent oracle
    const double gamma = 0.95;
    const SuperstateModel model = build_exact(probe_env(), 1);
    const WindowPolicy policy = random_policy(model.idx, 7);
    const double exact = superstate_policy_value(model, policy, gamma);

    Rng rng(1001);
    const int episodes = 20'000;
    const int horizon = mc_horizon(gamma);
    double sum = 0.0, sum_sq = 0.0;
    for (int e = 0; e < episodes; ++e) {
        std::int64_t w = 0;
        double ret = 0.0, disc = 1.0;
        for (int t = 0; t < horizon; ++t) {
            const int a = policy.action_at(w);
            ret += disc * model.reward_at(w, a);
            disc *= gamma;
            double row[2] = {model.trans_at(w, a, 0), model.trans_at(w, a, 1)};
            const int o = rng.sample(std::span<const double>(row, 2));
            w = model.idx->next(w, a, o);
        }
        sum += ret;
        sum_sq += ret * ret;
    }
    const double mean = sum / episodes;
    const double se = std::sqrt(std::max(0.0, (sum_sq - sum * mean) / (episodes - 1)) / episodes);
    CHECK(std::abs(exact - mean) <= 3 * se + 1e-4);
}

TEST_CASE("pomdp evaluation: constant reward gives gamma * c / (1 - gamma)") {
    TabularPomdp p = probe_env();
    const double c = 0.5, gamma = 0.95;
    p.reward.assign(p.reward.size(), c);
    const SuperstateModel model = build_exact(p, 1);
    const WindowPolicy policy = random_policy(model.idx, 5);
    CHECK(pomdp_policy_value(p, policy, gamma) ==
          doctest::Approx(gamma * c / (1.0 - gamma)).epsilon(1e-10));
}

TEST_CASE("perfect observations make the window a sufficient statistic at m = 1") {
    const TabularPomdp p = perfect_obs_pomdp(55);
    const SuperstateModel model = build_exact(p, 1);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const WindowPolicy policy = random_policy(model.idx, seed);
        const double v_super = superstate_policy_value(model, policy, 0.9);
        const double v_pomdp = pomdp_policy_value(p, policy, 0.9);
        CHECK(std::abs(v_super - v_pomdp) <= 1e-9);
    }
}

TEST_CASE("pomdp evaluation agrees with truncated Monte-Carlo on probe") {
    const TabularPomdp p = probe_env();
    const SuperstateModel model = build_exact(p, 1);
    const WindowPolicy policy = random_policy(model.idx, 11);
    const double exact = pomdp_policy_value(p, policy, 0.95);
    const McEstimate mc = monte_carlo_policy_value(p, policy, 0.95, 20'000, 77);
    CHECK(mc.horizon == 238); // ceil(log(1e-4 * 0.05) / log(0.95))
    CHECK(std::abs(exact - mc.mean) <= 3 * mc.std_error + 1e-4);
}

TEST_CASE("optimal value of a single-action model equals its only policy") {
    const TabularPomdp p = random_pomdp(2, 1, 2, 0.1, 0.1, 3);
    const SuperstateModel model = build_exact(p, 2);
    const auto [v_star, policy] = optimal_superstate_value(model, 0.9, 1e-9);
    WindowPolicy only;
    only.idx = model.idx;
    only.actions.assign(static_cast<std::size_t>(model.n_windows()), 0);
    CHECK(v_star == doctest::Approx(superstate_policy_value(model, only, 0.9)).epsilon(1e-12));
}

TEST_CASE("probe optimal values are nondecreasing in m") {
    std::vector<double> values;
    for (int m : {1, 2, 3}) {
        const SuperstateModel model = build_exact(probe_env(), m);
        values.push_back(optimal_superstate_value(model, 0.95, 1e-9).first);
    }
    for (std::size_t i = 0; i + 1 < values.size(); ++i) CHECK(values[i] <= values[i + 1] + 1e-9);
}

TEST_CASE("tightening tol moves the optimal value by less than the loose tol") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    const double loose = optimal_superstate_value(model, 0.95, 1e-4).first;
    const double tight = optimal_superstate_value(model, 0.95, 1e-5).first;
    CHECK(std::abs(loose - tight) < 1e-4);
}

TEST_CASE("planning rejects bad arguments") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    CHECK_THROWS_AS(value_iteration(model, 1.0, 5, zero_q(model.idx)), ParameterError);
    CHECK_THROWS_AS(value_iteration(model, 0.95, -1, zero_q(model.idx)), ParameterError);
    QTable wrong = zero_q(std::make_shared<const WindowIndex>(WindowIndex::build(2, 2, 1)));
    CHECK_THROWS_AS(value_iteration(model, 0.95, 5, wrong), ParameterError);
    const WindowPolicy mismatched = random_policy(wrong.idx, 0);
    CHECK_THROWS_AS(superstate_policy_value(model, mismatched, 0.9), ParameterError);
    CHECK_THROWS_AS(pomdp_policy_value(probe_env(), mismatched, 0.9), ParameterError);
}

TEST_CASE("q and policy dumps carry the contract headers") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    const QTable q = value_iteration(model, 0.95, 10, zero_q(model.idx));
    std::ostringstream qs, ps;
    dump_q_csv(q, qs);
    dump_policy_csv(greedy(q), ps);
    CHECK(qs.str().rfind("window,action,q_value\n", 0) == 0);
    CHECK(ps.str().rfind("window,chosen_action\n", 0) == 0);
    CHECK(ps.str().find("∅,") != std::string::npos);
}

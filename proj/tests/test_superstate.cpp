#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "winpomdp/belief.hpp"
#include "winpomdp/errors.hpp"
#include "winpomdp/pomdp.hpp"
#include "winpomdp/rng.hpp"
#include "winpomdp/superstate.hpp"

using namespace winpomdp;

namespace {

Window random_history(Rng& rng, const TabularPomdp& p, int len) {
    Window h(static_cast<std::size_t>(len));
    for (AoPair& pair : h)
        pair = {static_cast<std::int32_t>(rng.next_int(p.n_actions)),
                static_cast<std::int32_t>(rng.next_int(p.n_obs))};
    return h;
}

} // namespace

TEST_CASE("exact rows sum to one on every reachable pair") {
    for (std::uint64_t seed : {1ull, 2ull}) {
        const TabularPomdp p = random_pomdp(3, 2, 2, 0.05, 0.05, seed);
        const SuperstateModel model = build_exact(p, 2);
        for (std::int64_t w = 0; w < model.n_windows(); ++w) {
            REQUIRE(model.is_reachable(w)); // beta > 0: everything reachable
            for (int a = 0; a < 2; ++a) {
                double sum = 0.0;
                for (int o = 0; o < 2; ++o) sum += model.trans_at(w, a, o);
                CHECK(std::abs(sum - 1.0) <= 1e-9);
            }
        }
    }
}

TEST_CASE("probe: empty-window probing transition splits evenly") {
    const SuperstateModel model = build_exact(probe_env(), 2);
    // successor ((p,o1)) sits at observation slot 0 of action 0
    const double expected = 0.5 * 0.975 + 0.5 * 0.025;
    CHECK(model.trans_at(0, 0, 0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(model.idx->to_text(model.idx->next(0, 0, 0)) == "a0o0");
}

TEST_CASE("probe: window rewards read the last observation") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    const WindowIndex& idx = *model.idx;
    const std::int64_t w_p_o1 = idx.encode({{0, 0}});
    CHECK(model.reward_at(w_p_o1, 1) == 1.0);  // (o1, a1)
    CHECK(model.reward_at(w_p_o1, 2) == -1.0); // (o1, a2)
    const std::int64_t w_p_o2 = idx.encode({{0, 1}});
    CHECK(model.reward_at(w_p_o2, 2) == 1.0);
    for (int a = 0; a < 3; ++a) CHECK(model.reward_at(0, a) == 0.0); // empty window
}

TEST_CASE("exact transitions agree with the window-belief definition") {
    const TabularPomdp p = random_pomdp(3, 2, 2, 0.04, 0.06, 33);
    const SuperstateModel model = build_exact(p, 2);
    const WindowIndex& idx = *model.idx;
    Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        const std::int64_t w = rng.next_int(static_cast<int>(idx.size()));
        const BeliefVector b = window_belief(p, p.init_dist, idx.decode(w));
        for (int a = 0; a < p.n_actions; ++a)
            for (int o = 0; o < p.n_obs; ++o) {
                double expect = 0.0;
                for (int s = 0; s < p.n_states; ++s)
                    expect += b[static_cast<std::size_t>(s)] * p.obs_at(s, a, o);
                CHECK(model.trans_at(w, a, o) == doctest::Approx(expect).epsilon(1e-12));
            }
    }
}

TEST_CASE("support is legal: only shift-append successors carry mass") {
    // the per-(w,a) storage is indexed by the O successors themselves, so the
    // dump is the observable contract: every successor has the right length
    const SuperstateModel model = build_exact(probe_env(), 2);
    const WindowIndex& idx = *model.idx;
    for (std::int64_t w = 0; w < idx.size(); ++w)
        for (int a = 0; a < idx.n_actions(); ++a)
            for (int o = 0; o < idx.n_obs(); ++o) {
                const std::int64_t w2 = idx.next(w, a, o);
                CHECK(idx.length(w2) == std::min(idx.m(), idx.length(w) + 1));
            }
}

TEST_CASE("unreachable windows are flagged when observations forbid them") {
    TabularPomdp p;
    p.n_states = 2;
    p.n_actions = 1;
    p.n_obs = 2;
    p.discount = 0.9;
    p.trans = {0.9, 0.1, 0.1, 0.9};
    p.obs = {1.0, 0.0, 0.0, 1.0}; // deterministic, state-revealing
    p.reward.assign(2, 0.0);
    p.init_dist = {1.0, 0.0}; // start surely in s0
    const SuperstateModel model = build_exact(p, 1);
    const WindowIndex& idx = *model.idx;
    CHECK(model.is_reachable(idx.encode({{0, 0}})));        // o0 observable at t=1
    CHECK_FALSE(model.is_reachable(idx.encode({{0, 1}}))); // o1 impossible from s0
}

TEST_CASE("lemma-1 gap is zero when the history is its own window") {
    const TabularPomdp p = probe_env();
    Rng rng(12);
    for (int m : {1, 2, 3}) {
        const Window h = random_history(rng, p, m);
        const Lemma1Gap gap = lemma1_gap(p, m, h, m);
        CHECK(gap.gap == 0.0);
        CHECK(gap.pass);
        CHECK(gap.history_len == m);
        CHECK(gap.window_len == m);
    }
}

TEST_CASE("lemma-1 gap on probe respects the (1-rho)^m bound") {
    const TabularPomdp p = probe_env();
    Rng rng(13);
    const int m = 3;
    const double bound = std::pow(1.0 - 0.0025, m);
    for (int i = 0; i < 50; ++i) {
        const Window h = random_history(rng, p, 8);
        const Lemma1Gap gap = lemma1_gap(p, m, h, m);
        CHECK(gap.bound == doctest::Approx(bound).epsilon(1e-12));
        CHECK(gap.gap <= gap.bound + 1e-12);
        CHECK(gap.pass);
    }
}

TEST_CASE("uniform transitions collapse every lemma-1 gap to zero") {
    TabularPomdp p = random_pomdp(3, 2, 2, 0.0, 0.1, 5);
    for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 2; ++a)
            for (int s2 = 0; s2 < 3; ++s2)
                p.trans[(static_cast<std::size_t>(s) * 2 + a) * 3 + s2] = 1.0 / 3;
    p.init_dist = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    Rng rng(14);
    for (int i = 0; i < 10; ++i) {
        const Window h = random_history(rng, p, 6);
        const Lemma1Gap gap = lemma1_gap(p, 2, h, 2);
        CHECK(gap.gap <= 1e-15);
    }
}

TEST_CASE("lemma-1 preconditions") {
    const TabularPomdp p = probe_env();
    Rng rng(15);
    const Window h = random_history(rng, p, 2);
    CHECK_THROWS_AS(lemma1_gap(p, 3, h, 3), ParameterError);  // |h| < m
    CHECK_THROWS_AS(lemma1_gap(p, 2, h, 3), ParameterError);  // w_len > m
}

TEST_CASE("model dump has the contract header and parses row-wise") {
    const SuperstateModel model = build_exact(probe_env(), 1);
    std::ostringstream out;
    dump_model_csv(model, out);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "window,action,successor,probability,reward");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        ++rows;
    }
    CHECK(rows == 7 * 3 * 2); // all windows reachable, A=3 rows of O=2 entries
}

#pragma once

#include <cstdint>
#include <vector>

#include "winpomdp/policy.hpp"
#include "winpomdp/pomdp.hpp"
#include "winpomdp/window.hpp"

namespace winpomdp {

/// A single seeded rollout. All sequences have length T. Rewards obey the
/// timing convention r_1 = 0, r_t = reward[o_{t-1}][a_t]. Hidden states are
/// recorded for diagnostics only; estimators never read them.
struct Trajectory {
    int n_actions = 0;
    int n_obs = 0;
    std::uint64_t seed = 0;
    std::vector<std::int32_t> actions;
    std::vector<std::int32_t> observations;
    std::vector<double> rewards;
    std::vector<std::int32_t> hidden_states;

    int length() const { return static_cast<int>(actions.size()); }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Seeded rollout of `policy` on `pomdp` for T steps: s_1 ~ mu, then per step
/// choose a_t (uniform draws or the policy's action at the current window),
/// emit o_t ~ obs[s_t][a_t], pay r_t by the timing convention, and move
/// s_{t+1} ~ trans[s_t][a_t]. Bit-reproducible in (pomdp, policy, T, seed).
Trajectory sample_trajectory(const TabularPomdp& pomdp, const PolicySpec& policy, int T,
                             std::uint64_t seed);

/// Window of the pairs (a_i, o_i) for i in [max(1, t-m), t-1]; the empty
/// window for t = 1. Valid for t in [1, T+1].
Window window_at(const WindowIndex& idx, const Trajectory& traj, int t);

} // namespace winpomdp

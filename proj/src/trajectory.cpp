#include "winpomdp/trajectory.hpp"

#include <span>
#include <string>

#include "winpomdp/errors.hpp"
#include "winpomdp/rng.hpp"

namespace winpomdp {

Trajectory sample_trajectory(const TabularPomdp& pomdp, const PolicySpec& policy, int T,
                             std::uint64_t seed) {
    if (T < 1) throw ParameterError("sample_trajectory: T must be >= 1");
    const WindowPolicy* wp = nullptr;
    if (!policy.is_uniform()) {
        wp = &policy.window_policy();
        if (wp->idx->n_actions() != pomdp.n_actions || wp->idx->n_obs() != pomdp.n_obs)
            throw ParameterError("sample_trajectory: policy alphabet (A=" +
                                 std::to_string(wp->idx->n_actions()) +
                                 ", O=" + std::to_string(wp->idx->n_obs()) +
                                 ") does not match the POMDP");
    }

    Rng rng(Rng::derive(seed, {0x74726a6full}));
    Trajectory traj;
    traj.n_actions = pomdp.n_actions;
    traj.n_obs = pomdp.n_obs;
    traj.seed = seed;
    traj.actions.reserve(static_cast<std::size_t>(T));
    traj.observations.reserve(static_cast<std::size_t>(T));
    traj.rewards.reserve(static_cast<std::size_t>(T));
    traj.hidden_states.reserve(static_cast<std::size_t>(T));

    const std::size_t S = static_cast<std::size_t>(pomdp.n_states);
    const std::size_t A = static_cast<std::size_t>(pomdp.n_actions);
    const std::size_t O = static_cast<std::size_t>(pomdp.n_obs);

    int s = rng.sample(std::span<const double>(pomdp.init_dist.data(), S));
    std::int64_t window = 0; // tracked only when a window policy drives actions
    for (int t = 1; t <= T; ++t) {
        const int a = wp ? wp->action_at(window) : rng.next_int(pomdp.n_actions);
        const int o = rng.sample(std::span<const double>(
            &pomdp.obs[(static_cast<std::size_t>(s) * A + static_cast<std::size_t>(a)) * O], O));
        const double r = (t == 1) ? 0.0 : pomdp.reward_at(traj.observations.back(), a);
        traj.hidden_states.push_back(static_cast<std::int32_t>(s));
        traj.actions.push_back(static_cast<std::int32_t>(a));
        traj.observations.push_back(static_cast<std::int32_t>(o));
        traj.rewards.push_back(r);
        s = rng.sample(std::span<const double>(
            &pomdp.trans[(static_cast<std::size_t>(s) * A + static_cast<std::size_t>(a)) * S], S));
        if (wp) window = wp->idx->next(window, a, o);
    }
    return traj;
}

Window window_at(const WindowIndex& idx, const Trajectory& traj, int t) {
    if (t < 1 || t > traj.length() + 1)
        throw ParameterError("window_at: t must lie in [1, T+1]");
    const int lo = std::max(1, t - idx.m());
    Window w;
    w.reserve(static_cast<std::size_t>(t - lo));
    for (int i = lo; i <= t - 1; ++i)
        w.push_back({traj.actions[static_cast<std::size_t>(i - 1)],
                     traj.observations[static_cast<std::size_t>(i - 1)]});
    return w;
}

} // namespace winpomdp

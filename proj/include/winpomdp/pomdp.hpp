#pragma once

#include <cstdint>
#include <vector>

namespace winpomdp {

/// Tabular POMDP with an action-dependent observation kernel. The reward
/// table is indexed [observation][action]; the timing convention throughout
/// the project is r_1 = 0 and r_t = reward[o_{t-1}][a_t] for t >= 2, so the
/// reward stream of a window policy coincides pathwise with the superstate
/// rewards r(last obs of window, action).
///
/// Instances are treated as immutable after construction and are safe to
/// share read-only across threads.
struct TabularPomdp {
    int n_states = 0;
    int n_actions = 0;
    int n_obs = 0;
    std::vector<double> trans;     // [s][a][s'] flattened, rows over s'
    std::vector<double> obs;       // [s][a][o] flattened, rows over o
    std::vector<double> reward;    // [o][a], values in [-1, 1]
    std::vector<double> init_dist; // over states
    double discount = 0.95;

    double trans_at(int s, int a, int s2) const {
        return trans[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    double obs_at(int s, int a, int o) const {
        return obs[(static_cast<std::size_t>(s) * n_actions + a) * n_obs + o];
    }
    double reward_at(int o, int a) const {
        return reward[static_cast<std::size_t>(o) * n_actions + a];
    }
};

/// Assumption-1/2 summary: exhaustive minima of the kernels and the induced
/// filter-stability coefficient rho = S * alpha * beta.
struct StabilityReport {
    double alpha = 0.0;
    double beta = 0.0;
    double rho = 0.0;
    bool assumption1_ok = false;
    bool assumption2_ok = false;
};

/// Checks all structural invariants (shapes, row sums within 1e-9, value
/// ranges) and returns the stability report. Throws ValidationError naming
/// the offending index on any violation. Pure function.
StabilityReport validate(const TabularPomdp& pomdp);

/// The Probe environment: S=2, A=3 (p, a1, a2), O=2. Transitions keep the
/// state with probability 0.95 under every action. Probing reveals the state
/// with probability 0.95 (plus uniform noise otherwise); a1/a2 reveal it with
/// probability 0.05. reward[o1][a1] = reward[o2][a2] = 1, crossed pairs -1,
/// probing pays 0. Uniform initial distribution.
TabularPomdp probe_env(double discount = 0.95);

/// Seeded random POMDP whose transition rows are convex mixtures of a random
/// simplex point with the uniform distribution, guaranteeing every transition
/// entry >= alpha_floor and every observation entry >= beta_floor. Rewards are
/// uniform in [-1, 1]; the initial distribution is a random simplex point.
/// Deterministic in `seed`.
TabularPomdp random_pomdp(int n_states, int n_actions, int n_obs, double alpha_floor,
                          double beta_floor, std::uint64_t seed);

} // namespace winpomdp

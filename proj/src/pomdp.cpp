#include "winpomdp/pomdp.hpp"

#include <cmath>
#include <string>

#include "winpomdp/errors.hpp"
#include "winpomdp/rng.hpp"

namespace winpomdp {

namespace {

constexpr double kRowSumTol = 1e-9;

void check_row(const std::vector<double>& flat, std::size_t row_start, int row_len,
               const std::string& what) {
    double sum = 0.0;
    for (int i = 0; i < row_len; ++i) {
        const double v = flat[row_start + static_cast<std::size_t>(i)];
        if (v < 0.0)
            throw ValidationError(what + "[" + std::to_string(i) + "] is negative (" +
                                  std::to_string(v) + ")");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
        throw ValidationError(what + " sums to " + std::to_string(sum) + ", expected 1");
}

} // namespace

StabilityReport validate(const TabularPomdp& p) {
    if (p.n_states < 1 || p.n_actions < 1 || p.n_obs < 1)
        throw ValidationError("validate: S, A, O must all be positive");
    const std::size_t S = static_cast<std::size_t>(p.n_states);
    const std::size_t A = static_cast<std::size_t>(p.n_actions);
    const std::size_t O = static_cast<std::size_t>(p.n_obs);
    if (p.trans.size() != S * A * S) throw ValidationError("validate: trans has wrong shape");
    if (p.obs.size() != S * A * O) throw ValidationError("validate: obs has wrong shape");
    if (p.reward.size() != O * A) throw ValidationError("validate: reward has wrong shape");
    if (p.init_dist.size() != S) throw ValidationError("validate: init_dist has wrong shape");
    if (!(p.discount > 0.0 && p.discount < 1.0))
        throw ValidationError("validate: discount must lie in (0, 1)");

    for (int s = 0; s < p.n_states; ++s)
        for (int a = 0; a < p.n_actions; ++a) {
            check_row(p.trans, (static_cast<std::size_t>(s) * A + static_cast<std::size_t>(a)) * S,
                      p.n_states, "trans[" + std::to_string(s) + "][" + std::to_string(a) + "]");
            check_row(p.obs, (static_cast<std::size_t>(s) * A + static_cast<std::size_t>(a)) * O,
                      p.n_obs, "obs[" + std::to_string(s) + "][" + std::to_string(a) + "]");
        }
    check_row(p.init_dist, 0, p.n_states, "init_dist");
    for (int o = 0; o < p.n_obs; ++o)
        for (int a = 0; a < p.n_actions; ++a) {
            const double r = p.reward_at(o, a);
            if (r < -1.0 || r > 1.0)
                throw ValidationError("validate: reward[" + std::to_string(o) + "][" +
                                      std::to_string(a) + "] = " + std::to_string(r) +
                                      " outside [-1, 1]");
        }

    StabilityReport rep;
    rep.alpha = p.trans[0];
    for (double v : p.trans) rep.alpha = std::min(rep.alpha, v);
    rep.beta = p.obs[0];
    for (double v : p.obs) rep.beta = std::min(rep.beta, v);
    rep.rho = p.n_states * rep.alpha * rep.beta;
    rep.assumption1_ok = rep.alpha > 0.0;
    rep.assumption2_ok = rep.beta > 0.0;
    return rep;
}

TabularPomdp probe_env(double discount) {
    TabularPomdp p;
    p.n_states = 2;
    p.n_actions = 3; // 0 = probe, 1 = a1, 2 = a2
    p.n_obs = 2;
    p.discount = discount;
    p.trans.assign(2 * 3 * 2, 0.0);
    p.obs.assign(2 * 3 * 2, 0.0);
    p.reward.assign(2 * 3, 0.0);
    p.init_dist = {0.5, 0.5};

    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 3; ++a) {
            const std::size_t t = (static_cast<std::size_t>(s) * 3 + a) * 2;
            p.trans[t + static_cast<std::size_t>(s)] = 0.95;
            p.trans[t + static_cast<std::size_t>(1 - s)] = 0.05;
            // probing reveals with probability 0.95, a1/a2 with 0.05; the
            // non-reveal branch emits a uniform observation, so the correct
            // observation has mass reveal + (1 - reveal) / 2
            const double correct = (a == 0) ? 0.975 : 0.525;
            const double wrong = (a == 0) ? 0.025 : 0.475;
            const std::size_t o = (static_cast<std::size_t>(s) * 3 + a) * 2;
            p.obs[o + static_cast<std::size_t>(s)] = correct;
            p.obs[o + static_cast<std::size_t>(1 - s)] = wrong;
        }

    p.reward[0 * 3 + 1] = 1.0;  // (o1, a1)
    p.reward[0 * 3 + 2] = -1.0; // (o1, a2)
    p.reward[1 * 3 + 1] = -1.0; // (o2, a1)
    p.reward[1 * 3 + 2] = 1.0;  // (o2, a2)
    return p;
}

namespace {

/// Random simplex point via normalized exponentials; all entries positive.
void fill_simplex(Rng& rng, double* row, int n) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = -std::log(1.0 - rng.next_double());
        row[i] = e;
        sum += e;
    }
    for (int i = 0; i < n; ++i) row[i] /= sum;
}

/// Convex mixture with the uniform distribution at weight lambda = n * floor,
/// so every entry is at least floor. lambda = 1 forces the exact uniform row.
void mix_with_uniform(double* row, int n, double floor) {
    const double lambda = n * floor;
    const double u = 1.0 / n;
    for (int i = 0; i < n; ++i) row[i] = (1.0 - lambda) * row[i] + lambda * u;
}

} // namespace

TabularPomdp random_pomdp(int n_states, int n_actions, int n_obs, double alpha_floor,
                          double beta_floor, std::uint64_t seed) {
    if (n_states < 1 || n_actions < 1 || n_obs < 1)
        throw ParameterError("random_pomdp: S, A, O must all be positive");
    if (alpha_floor < 0.0 || beta_floor < 0.0)
        throw ParameterError("random_pomdp: floors must be non-negative");
    if (n_states * alpha_floor > 1.0)
        throw ParameterError("random_pomdp: infeasible alpha_floor (S * alpha_floor > 1)");
    if (n_obs * beta_floor > 1.0)
        throw ParameterError("random_pomdp: infeasible beta_floor (O * beta_floor > 1)");

    Rng rng(Rng::derive(seed, {0x706f6d6470ull}));
    TabularPomdp p;
    p.n_states = n_states;
    p.n_actions = n_actions;
    p.n_obs = n_obs;
    p.discount = 0.95;
    p.trans.assign(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0);
    p.obs.assign(static_cast<std::size_t>(n_states) * n_actions * n_obs, 0.0);
    p.reward.assign(static_cast<std::size_t>(n_obs) * n_actions, 0.0);
    p.init_dist.assign(static_cast<std::size_t>(n_states), 0.0);

    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) {
            double* t = &p.trans[(static_cast<std::size_t>(s) * n_actions + a) * n_states];
            fill_simplex(rng, t, n_states);
            mix_with_uniform(t, n_states, alpha_floor);
            double* o = &p.obs[(static_cast<std::size_t>(s) * n_actions + a) * n_obs];
            fill_simplex(rng, o, n_obs);
            mix_with_uniform(o, n_obs, beta_floor);
        }
    for (double& r : p.reward) r = 2.0 * rng.next_double() - 1.0;
    fill_simplex(rng, p.init_dist.data(), n_states);
    return p;
}

} // namespace winpomdp

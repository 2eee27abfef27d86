#include "winpomdp/belief.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "winpomdp/errors.hpp"
#include "winpomdp/rng.hpp"

namespace winpomdp {

BeliefVector belief_update(const TabularPomdp& pomdp, const BeliefVector& b, int action, int obs) {
    if (static_cast<int>(b.size()) != pomdp.n_states)
        throw ParameterError("belief_update: belief dimension does not match the POMDP");
    if (action < 0 || action >= pomdp.n_actions || obs < 0 || obs >= pomdp.n_obs)
        throw ParameterError("belief_update: (action, observation) out of range");

    BeliefVector out(b.size(), 0.0);
    double z = 0.0;
    for (int s = 0; s < pomdp.n_states; ++s) {
        const double w = b[static_cast<std::size_t>(s)] * pomdp.obs_at(s, action, obs);
        if (w == 0.0) continue;
        for (int s2 = 0; s2 < pomdp.n_states; ++s2) {
            const double inc = w * pomdp.trans_at(s, action, s2);
            out[static_cast<std::size_t>(s2)] += inc;
            z += inc;
        }
    }
    if (z <= 0.0)
        throw FilteringError("belief_update: zero normalizer for (a=" + std::to_string(action) +
                             ", o=" + std::to_string(obs) + ")");
    for (double& v : out) v /= z;
    return out;
}

BeliefVector window_belief(const TabularPomdp& pomdp, const BeliefVector& prior, const Window& w) {
    // Iterated normalized updates rather than one unnormalized forward
    // product; products of many small factors underflow on long windows.
    BeliefVector b = prior;
    for (const AoPair& p : w) {
        try {
            b = belief_update(pomdp, b, p.action, p.obs);
        } catch (const FilteringError&) {
            throw UnreachableWindowError("window_belief: window " + WindowIndex::to_text(w) +
                                         " has zero probability under the prior");
        }
    }
    return b;
}

double tv_distance(const BeliefVector& a, const BeliefVector& b) {
    if (a.size() != b.size())
        throw ParameterError("tv_distance: dimension mismatch (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    double l1 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
    return 0.5 * l1;
}

ContractionAudit contraction_audit(const TabularPomdp& pomdp, int n_pairs, int max_len,
                                   std::uint64_t seed) {
    const StabilityReport rep = validate(pomdp);
    if (!rep.assumption1_ok || !rep.assumption2_ok)
        throw ParameterError("contraction_audit: requires alpha > 0 and beta > 0 (got alpha=" +
                             std::to_string(rep.alpha) + ", beta=" + std::to_string(rep.beta) +
                             ")");
    if (n_pairs < 1 || max_len < 0)
        throw ParameterError("contraction_audit: need n_pairs >= 1 and max_len >= 0");

    Rng rng(Rng::derive(seed, {0x61756469ull}));
    const auto sample_history = [&]() {
        const int len = rng.next_int(max_len + 1);
        Window h(static_cast<std::size_t>(len));
        for (AoPair& p : h)
            p = {static_cast<std::int32_t>(rng.next_int(pomdp.n_actions)),
                 static_cast<std::int32_t>(rng.next_int(pomdp.n_obs))};
        return h;
    };

    ContractionAudit audit;
    audit.pairs = n_pairs;
    audit.bound = 1.0 - rep.rho;
    audit.pass = true;
    constexpr double kCushion = 1e-12;

    for (int i = 0; i < n_pairs; ++i) {
        const Window h1 = sample_history();
        const Window h2 = sample_history();
        BeliefVector b1, b2;
        try {
            b1 = window_belief(pomdp, pomdp.init_dist, h1);
            b2 = window_belief(pomdp, pomdp.init_dist, h2);
        } catch (const UnreachableWindowError&) {
            ++audit.skipped;
            continue;
        }
        const double tv_before = tv_distance(b1, b2);
        for (int a = 0; a < pomdp.n_actions; ++a)
            for (int o = 0; o < pomdp.n_obs; ++o) {
                const double tv_after =
                    tv_distance(belief_update(pomdp, b1, a, o), belief_update(pomdp, b2, a, o));
                ++audit.checks;
                if (tv_after > audit.bound * tv_before + kCushion) audit.pass = false;
                // ratios below the cushion scale are rounding dust, not data
                if (tv_before > kCushion)
                    audit.max_ratio = std::max(audit.max_ratio, tv_after / tv_before);
            }
    }
    return audit;
}

std::string to_json(const ContractionAudit& audit) {
    nlohmann::json j;
    j["pairs"] = audit.pairs;
    j["max_ratio"] = audit.max_ratio;
    j["bound"] = audit.bound;
    j["pass"] = audit.pass;
    j["skipped"] = audit.skipped;
    return j.dump();
}

} // namespace winpomdp

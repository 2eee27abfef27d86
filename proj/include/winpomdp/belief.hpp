#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "winpomdp/pomdp.hpp"
#include "winpomdp/window.hpp"

namespace winpomdp {

/// Probability vector over hidden states.
using BeliefVector = std::vector<double>;

/// One exact filter step: the posterior over the next hidden state after
/// taking `action` from belief `b` and observing `obs`,
///   b'(s') ∝ sum_s b(s) * trans[s][a][s'] * obs[s][a][o].
/// Throws FilteringError when the normalizer vanishes (impossible when the
/// observation kernel is strictly positive).
BeliefVector belief_update(const TabularPomdp& pomdp, const BeliefVector& b, int action, int obs);

/// Belief at the end of `w` starting from `prior`, computed by folding
/// belief_update over the pairs of w. The empty window returns the prior
/// unchanged. `w` may be arbitrarily long, so this also serves as the exact
/// full-history filter. Throws UnreachableWindowError when w has zero forward
/// probability under the prior.
BeliefVector window_belief(const TabularPomdp& pomdp, const BeliefVector& prior, const Window& w);

/// Total variation distance: half the l1 distance. Result in [0, 1].
double tv_distance(const BeliefVector& a, const BeliefVector& b);

/// Result of the one-step filter-contraction audit.
struct ContractionAudit {
    int pairs = 0;         // history pairs sampled
    int checks = 0;        // (pair, action, observation) checks performed
    double max_ratio = 0.0; // max TV(updated) / TV(before) over checks with TV(before) > 0
    double bound = 1.0;     // 1 - S * alpha * beta
    bool pass = false;
    int skipped = 0;       // histories unreachable under the sampler
};

/// Samples `n_pairs` pairs of random histories (lengths <= max_len, seeded),
/// computes their beliefs under the prior mu, and checks for every (a, o)
/// that the updated beliefs contract in total variation at rate at least
/// rho = S * alpha * beta (with a 1e-12 cushion). Requires both assumptions
/// to hold; throws ParameterError otherwise.
ContractionAudit contraction_audit(const TabularPomdp& pomdp, int n_pairs, int max_len,
                                   std::uint64_t seed);

/// JSON form {pairs, max_ratio, bound, pass, skipped}.
std::string to_json(const ContractionAudit& audit);

} // namespace winpomdp

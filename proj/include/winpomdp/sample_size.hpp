#pragma once

#include <cstdint>

namespace winpomdp {

/// Trajectory-length and iteration-count bounds from the sample-complexity
/// guarantee:
///   T >= 8 A^{2m} (m+1)^2 / (alpha^2 S^2 beta^{2m} eps^2)
///        * log(24 A^{2m+1} O^{2m} / delta)
///   K >= log(2 (1 - gamma) / eps) / (1 - gamma), clamped to at least 1.
/// Evaluated in 100-digit arithmetic and ceiled exactly; values that do not
/// fit in 64 bits saturate with the corresponding overflow flag set.
struct SampleSizeBounds {
    std::uint64_t t_bound = 0;
    std::uint64_t k_bound = 1;
    bool t_overflow = false;
    bool k_overflow = false;
};

SampleSizeBounds theoretical_sample_size(double eps, double delta, int m, int n_states,
                                         int n_actions, int n_obs, double alpha, double beta,
                                         double gamma);

} // namespace winpomdp

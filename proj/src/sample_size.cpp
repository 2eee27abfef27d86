#include "winpomdp/sample_size.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "winpomdp/errors.hpp"

namespace winpomdp {

namespace {

using big_float = boost::multiprecision::cpp_bin_float_100;

/// Ceil to uint64 with saturation.
std::uint64_t ceil_to_u64(const big_float& v, bool& overflow) {
    const big_float c = boost::multiprecision::ceil(v);
    if (c >= big_float("18446744073709551616")) { // 2^64
        overflow = true;
        return UINT64_MAX;
    }
    overflow = false;
    if (c < 1) return 1;
    return static_cast<std::uint64_t>(c);
}

} // namespace

SampleSizeBounds theoretical_sample_size(double eps, double delta, int m, int n_states,
                                         int n_actions, int n_obs, double alpha, double beta,
                                         double gamma) {
    if (!(eps > 0.0)) throw ParameterError("theoretical_sample_size: eps must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw ParameterError("theoretical_sample_size: delta must lie in (0, 1)");
    if (!(alpha > 0.0)) throw ParameterError("theoretical_sample_size: alpha must be positive");
    if (!(beta > 0.0)) throw ParameterError("theoretical_sample_size: beta must be positive");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ParameterError("theoretical_sample_size: gamma must lie in (0, 1)");
    if (m < 1 || n_states < 1 || n_actions < 1 || n_obs < 1)
        throw ParameterError("theoretical_sample_size: m, S, A, O must all be positive");

    const big_float A(n_actions), O(n_obs), S(n_states);
    const big_float al(alpha), be(beta), ep(eps), de(delta), ga(gamma);
    const int mm = m;

    const big_float numerator = 8 * boost::multiprecision::pow(A, 2 * mm) * (mm + 1) * (mm + 1);
    const big_float denominator =
        al * al * S * S * boost::multiprecision::pow(be, 2 * mm) * ep * ep;
    const big_float log_term = boost::multiprecision::log(
        24 * boost::multiprecision::pow(A, 2 * mm + 1) * boost::multiprecision::pow(O, 2 * mm) /
        de);
    const big_float t_value = numerator / denominator * log_term;

    SampleSizeBounds out;
    out.t_bound = ceil_to_u64(t_value, out.t_overflow);

    const big_float k_value = boost::multiprecision::log(2 * (1 - ga) / ep) / (1 - ga);
    bool k_overflow = false;
    out.k_bound = ceil_to_u64(k_value, k_overflow); // already clamps to >= 1
    out.k_overflow = k_overflow;
    return out;
}

} // namespace winpomdp

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

#include "winpomdp/errors.hpp"

namespace winpomdp {

/// Counter-based deterministic generator (splitmix64). All sampling in this
/// project goes through explicit draws from this class so that results are
/// bit-reproducible across platforms; std:: distributions are deliberately
/// not used. Substreams are derived by hashing a path of 64-bit words into
/// the seed, so parallel runs can use independent streams keyed by
/// (master_seed, m, T, run) without sharing state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection sampling, exact and deterministic.
    int next_int(int n) {
        if (n <= 0) throw ParameterError("Rng::next_int: n must be positive");
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<int>(x % un);
    }

    /// Draw from a categorical distribution given by `probs` (assumed to sum
    /// to ~1). Linear CDF scan; ties and float dust resolve deterministically
    /// to the last index with positive mass.
    int sample(std::span<const double> probs) {
        const double u = next_double();
        double cum = 0.0;
        int last_positive = -1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) last_positive = static_cast<int>(i);
            cum += probs[i];
            if (u < cum) return static_cast<int>(i);
        }
        if (last_positive < 0) throw ParameterError("Rng::sample: all-zero distribution");
        return last_positive;
    }

    /// Stateless substream derivation: mixes the path words into `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        Rng h(seed);
        std::uint64_t acc = h.next_u64();
        for (std::uint64_t w : path) {
            Rng g(acc ^ (w + 0x9e3779b97f4a7c15ull));
            acc = g.next_u64();
        }
        return acc;
    }

    Rng substream(std::initializer_list<std::uint64_t> path) const {
        return Rng(derive(state_, path));
    }

  private:
    std::uint64_t state_;
};

} // namespace winpomdp

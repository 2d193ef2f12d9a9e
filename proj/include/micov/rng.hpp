#pragma once

#include <cmath>
#include <cstdint>

namespace micov {

/// Counter-based 64-bit generator (SplitMix64, Steele et al. 2014).
///
/// Output i of stream s is a pure function of (s, i): the state walks the
/// Weyl sequence s + i*GAMMA and each step is finalized with the SplitMix64
/// mixer. Streams are split with derive_stream(master, id), which runs the
/// same mixer over (master, id), so every subject / noise draw gets an
/// independent substream reproducible across platforms and languages.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += GAMMA);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; never returns 0 (safe under log()).
    double next_open_double() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        // Rejection-free modulo bias is acceptable here: n is tiny (regime
        // counts, concept picks) relative to 2^64.
        return next_u64() % n;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller. Caches the second deviate so a
    /// stream of gaussians consumes exactly one uniform pair per two draws.
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_open_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    static std::uint64_t derive_stream(std::uint64_t master, std::uint64_t stream_id) {
        Rng mixer(master + (stream_id + 1) * GAMMA);
        return mixer.next_u64();
    }

private:
    static constexpr std::uint64_t GAMMA = 0x9e3779b97f4a7c15ULL;

    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace micov

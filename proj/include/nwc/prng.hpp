#pragma once

// Deterministic random sampling.  std::uniform_real_distribution and friends
// are implementation-defined, so every mapping from raw 64-bit draws to
// numbers is spelled out here; given the same seed, sampled values are
// identical across compilers on the same platform.

#include <cmath>
#include <cstdint>
#include <random>

namespace nwc {

// Used to derive independent substreams (per orthant, per face, per trial)
// from one user-facing seed without correlation between streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Prng {
public:
    explicit Prng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi] (inclusive), rejection-free modulo bias is
    // negligible for the small ranges used here but we reject anyway.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span) - 1;
        std::uint64_t draw;
        do { draw = eng_(); } while (draw > limit);
        return lo + static_cast<std::int64_t>(draw % span);
    }

    // Standard normal via Box-Muller (explicit, no std::normal_distribution).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do { u1 = u01(); } while (u1 <= 0.0);
        u2 = u01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Log-uniform magnitude in [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return lo * std::exp(u01() * std::log(hi / lo));
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace nwc

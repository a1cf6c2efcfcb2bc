#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hedgekit::rng {

// Stable seed mixing. Used everywhere a (master_seed, stream_index) pair has
// to map to an independent generator so results do not depend on execution
// order or thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream));
}

// mt19937_64 with explicitly pinned derived distributions. std::*_distribution
// is implementation-defined, so the draws below are hand-rolled to keep output
// reproducible across standard libraries.
class Generator {
public:
    explicit Generator(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Modulo bias is below 1e-18 for the n used
    // here (resample lengths), so no rejection loop.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

    // Standard normal via Box-Muller; caches the second deviate.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        while (u1 <= 0.0) u1 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Zero-mean, unit-variance two-component normal mixture with negative skew
// (sample skewness around -1.1). Used by the simulator to produce asymmetric
// spot innovations.
class NegSkewMixture {
public:
    double draw(Generator& gen) const {
        if (gen.next_uniform() < p_) {
            return mu1_ + sigma1_ * gen.next_normal();
        }
        return mu2_ + sigma2_ * gen.next_normal();
    }

private:
    // p*mu1 + (1-p)*mu2 = 0 and p*(s1^2+mu1^2) + (1-p)*(s2^2+mu2^2) = 1.
    static constexpr double p_ = 0.1;
    static constexpr double mu1_ = -2.0;
    static constexpr double mu2_ = 2.0 / 9.0;
    static constexpr double sigma1_ = 1.0;
    static constexpr double sigma2_ = 0.7114583267;
};

}  // namespace hedgekit::rng

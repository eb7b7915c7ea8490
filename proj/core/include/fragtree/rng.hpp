#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fragtree {

// Counter-based generator: the draw sequence is a pure function of
// (seed, stream), so parallel reps can use derived substreams and merge
// results in any order without losing reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        state_ = mix(mix(seed) ^ mix(stream ^ 0x6a09e667f3bcc909ull));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Independent generator for rep `index`, regardless of how much this
    // generator has been consumed.
    Rng substream(std::uint64_t index) const {
        return Rng(seed_, mix(stream_ + 0x9e3779b97f4a7c15ull) ^ mix(index));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        // rejection to kill modulo bias
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    double exponential() {
        return -std::log1p(-next_double());
    }

    double normal() {
        // Box-Muller, one value per call so the draw count stays predictable
        double u1 = next_double();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Marsaglia-Tsang; the shape<1 case is boosted through shape+1.
    double gamma(double shape, double scale = 1.0) {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw std::invalid_argument("Rng::gamma: shape and scale must be positive");
        if (shape < 1.0) {
            double u = next_double();
            while (u <= 0.0) u = next_double();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_double();
            if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
        }
    }

    double beta(double a, double b) {
        double x = gamma(a);
        double y = gamma(b);
        if (x + y <= 0.0) return 0.5;
        return x / (x + y);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
};

} // namespace fragtree

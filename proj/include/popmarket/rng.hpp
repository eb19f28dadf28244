#pragma once

#include <cstdint>
#include <random>

namespace popmarket {

// splitmix64 mixing step (Vigna's public-domain constants).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One deterministic random stream. Every realization owns exactly one.
//
// All draws go through the methods below so replays consume the engine in a
// fixed order on every platform. Doubles come from the top 53 bits of the
// engine output rather than std::uniform_real_distribution, whose draw
// behavior is implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    // n <= 1 returns 0 without consuming a draw.
    std::uint64_t next_index(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t threshold = (std::uint64_t{0} - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    // True with probability p. Always consumes exactly one draw.
    bool bernoulli(double p) { return next_unit() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace popmarket

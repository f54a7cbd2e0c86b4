#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace emograph {

// Deterministic random source. All draws are built from raw mt19937_64
// output with fixed bit manipulation, so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller (cached spare).
    double normal();

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::span<T> xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            std::swap(xs[i - 1], xs[static_cast<std::size_t>(below(i))]);
        }
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Seed for a named substream of a root seed. Distinct names (and indices)
// give statistically independent streams; the mapping is stable across
// runs and platforms.
std::uint64_t substream_seed(std::uint64_t root, std::string_view name,
                             std::uint64_t a = 0, std::uint64_t b = 0);

inline Rng substream(std::uint64_t root, std::string_view name,
                     std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng(substream_seed(root, name, a, b));
}

}  // namespace emograph

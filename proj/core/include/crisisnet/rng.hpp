#pragma once

#include <cstdint>
#include <vector>

namespace crisisnet {

// All randomness in the library flows through the generators below. The std
// distributions are deliberately avoided: their output is not pinned by the
// standard, and reproducibility across toolchains is a hard requirement here.
// Streams are frozen by golden-value tests.

// SplitMix64 (Steele/Lea/Flood mixer). Used for seeding and seed derivation.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
};

// Stateless finalizer of SplitMix64 (a bijection on 64-bit words).
std::uint64_t mix64(std::uint64_t x);

// xoshiro256** 1.0 (Blackman/Vigna), seeded via SplitMix64.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed);
    std::uint64_t next();
    // uniform in [0,1), 53-bit resolution
    double uniform01();
    // uniform in (0,1]; safe as a log() argument
    double uniform01_pos();

private:
    std::uint64_t s_[4];
};

// Unbiased integer in [0, n) by rejection; n must be > 0.
std::uint64_t uniform_below(Xoshiro256ss& rng, std::uint64_t n);

// Fisher-Yates, descending index, j = uniform_below(i + 1).
template <typename T>
void shuffle(std::vector<T>& v, Xoshiro256ss& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// Standard normal via Box-Muller (cosine branch only, no cached spare).
double gaussian(Xoshiro256ss& rng);

// Counter-based per-sample seed for ensemble runs: mix64(master + GOLDEN*(index+1)).
// Distinct indices map to distinct seeds for a fixed master seed.
std::uint64_t derive_sample_seed(std::uint64_t master_seed, std::uint64_t index);

} // namespace crisisnet

#include "crisisnet/rng.hpp"

#include <cmath>

#include "crisisnet/errors.hpp"

namespace crisisnet {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}
} // namespace

std::uint64_t SplitMix64::next() {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
}

std::uint64_t Xoshiro256ss::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256ss::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256ss::uniform01_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t uniform_below(Xoshiro256ss& rng, std::uint64_t n) {
    if (n == 0) throw Error("uniform_below: n must be positive");
    const std::uint64_t limit = (UINT64_MAX / n) * n;
    std::uint64_t x;
    do {
        x = rng.next();
    } while (x >= limit);
    return x % n;
}

double gaussian(Xoshiro256ss& rng) {
    const double u1 = rng.uniform01_pos();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t derive_sample_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(master_seed + kGolden * (index + 1));
}

} // namespace crisisnet

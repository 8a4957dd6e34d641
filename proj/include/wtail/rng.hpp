#pragma once

#include <cstdint>

namespace wtail {

// SplitMix64: a counter-based 64-bit mixer (Steele, Lea, Flood 2014).  Each
// stream is keyed by its seed, so per-replication streams derived through
// derive_seed are reproducible independently of execution order.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

class splitmix64 {
  public:
    explicit splitmix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform double strictly inside (0,1): 53 mantissa bits, half-ulp offset.
    double next_unit() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

inline constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return mix64(base_seed + kGolden * (index + 1));
}

inline constexpr const char* rng_name() noexcept { return "splitmix64"; }

}  // namespace wtail

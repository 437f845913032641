#pragma once

#include <cstdint>
#include <random>

namespace holouav {

// Stream ids keep independent random purposes (user placement, benchmark
// amplitudes, weight initialization) decoupled under one master seed.
inline constexpr std::uint64_t stream_user_placement = 0;
inline constexpr std::uint64_t stream_benchmark_weights = 1;
inline constexpr std::uint64_t stream_weight_init = 2;

// Deterministic engine for (master seed, realization, stream).  seed_seq
// mixing is fully specified by the standard, so streams are reproducible
// across platforms.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t realization,
                                   std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(realization),
                      static_cast<std::uint32_t>(realization >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// Uniform double in [0, 1) from the top 53 bits; avoids distribution objects
// whose outputs differ across standard library implementations.
inline double unit_double(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

} // namespace holouav

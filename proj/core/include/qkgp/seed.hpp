#pragma once

#include <cstdint>

namespace qkgp {

/// Counter-based seed derivation. Every random stream in the library is
/// obtained from one user seed through this function, so a stream can be
/// regenerated without replaying the ones before it.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) noexcept;

/// Named stream identifiers.
namespace streams {
inline constexpr std::uint64_t dataset = 1;
inline constexpr std::uint64_t test_set = 2;
inline constexpr std::uint64_t optimizer = 3;
inline constexpr std::uint64_t rollout = 4;
inline constexpr std::uint64_t shots = 5;
inline constexpr std::uint64_t hardware = 6;
}  // namespace streams

}  // namespace qkgp

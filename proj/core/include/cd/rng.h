#pragma once

#include <cstdint>
#include <random>

namespace cd {

using rng_t = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
	z += 0x9e3779b97f4a7c15ULL;
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

/// Seed of run `index` in an ensemble started from `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
	return mix64(mix64(master) ^ (index * 0xd1342543de82ef95ULL + 1));
}

inline double uniform01(rng_t& rng) {
	return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_index(rng_t& rng, std::size_t n) {
	return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

} // namespace cd

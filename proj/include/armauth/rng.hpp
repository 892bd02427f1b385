#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace armauth {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a path of integer tags.
/// Every component draws its randomness from a seed derived this way, so a
/// single master seed determines a whole run.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t s = mix64(master);
    for (auto t : tags) s = mix64(s ^ mix64(t + 0x632be59bd9b4e019ULL));
    return s;
}

// Stable tags for the seed tree.
namespace seed_tag {
inline constexpr std::uint64_t kBootstrap = 1;
inline constexpr std::uint64_t kModel = 2;
inline constexpr std::uint64_t kFolds = 3;
inline constexpr std::uint64_t kSynth = 4;
inline constexpr std::uint64_t kSession = 5;
}  // namespace seed_tag

}  // namespace armauth

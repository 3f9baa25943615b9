#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace uwbsim {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) noexcept { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal sampler, Marsaglia-Tsang ziggurat with 128 layers. One
/// engine draw per sample on the fast path; stateless apart from the tables.
class NormalSampler {
 public:
  double operator()(Rng& rng) noexcept;

 private:
  double tail(Rng& rng, std::int32_t hz, std::uint32_t iz) noexcept;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from a master seed, a stream tag and a
/// list of indices (snr point, realization, user, ...). The result depends
/// only on its arguments, so work items can run in any order or thread.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::initializer_list<std::uint64_t> indices = {}) noexcept;

/// 64-bit FNV-1a, used for cache keys and scenario hashes.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

}  // namespace uwbsim

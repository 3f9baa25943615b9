#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "uwbsim/mcs.hpp"

namespace uwbsim {

/// Maps a rational code rate onto a supported punctured rate; ConfigError otherwise.
CodeRate parse_code_rate(Rational rate);

/// Constraint-length-7, rate-1/3 mother code (generators 133, 165, 171 octal)
/// punctured to the WiMedia rates. The encoder appends six zero tail bits so
/// every block starts and ends in state 0.
class ConvolutionalCode {
 public:
  static constexpr int kConstraintLength = 7;
  static constexpr int kMemory = kConstraintLength - 1;
  static constexpr int kNumStates = 1 << kMemory;
  static constexpr std::array<std::uint8_t, 3> kGenerators = {0133, 0165, 0171};

  explicit ConvolutionalCode(CodeRate rate);

  CodeRate rate() const noexcept { return rate_; }

  /// Coded length for `info_bits` payload bits, tail included.
  std::size_t encoded_length(std::size_t info_bits) const noexcept;

  /// Largest payload whose coded length fits into `coded_bits`.
  std::size_t max_info_bits(std::size_t coded_bits) const noexcept;

  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> bits) const;

  /// Expands punctured LLRs back to the mother-code stream, with zeros
  /// (erasures) at stolen positions. `llrs` must hold encoded_length(info_bits).
  std::vector<float> depuncture(std::span<const float> llrs, std::size_t info_bits) const;

  /// Keep-mask of the puncturing pattern: [period][output A/B/C].
  std::span<const std::array<bool, 3>> puncture_pattern() const noexcept { return pattern_; }

 private:
  CodeRate rate_;
  std::vector<std::array<bool, 3>> pattern_;
};

/// Convenience form of ConvolutionalCode(rate).encode(bits).
std::vector<std::uint8_t> encode(std::span<const std::uint8_t> bits, CodeRate rate);

/// Soft-decision Viterbi decoder for the mother code. Holds its own work
/// buffers, so one instance per thread.
class ViterbiDecoder {
 public:
  ViterbiDecoder();

  /// `mother_llrs` has 3 * (info_bits + 6) entries, LLR > 0 meaning bit 0.
  /// Returns the `info_bits` maximum-likelihood payload bits.
  std::vector<std::uint8_t> decode(std::span<const float> mother_llrs, std::size_t info_bits);

  /// Depuncture + decode in one call.
  std::vector<std::uint8_t> decode(const ConvolutionalCode& code, std::span<const float> llrs,
                                   std::size_t info_bits);

 private:
  // Transition sign of generator g for the butterfly j, predecessor 2j, input 0.
  alignas(16) std::array<std::array<float, 32>, 3> sign_{};
  // One word per trellis step; bit s set when state s survived via its odd predecessor.
  std::vector<std::uint64_t> decisions_;
};

}  // namespace uwbsim

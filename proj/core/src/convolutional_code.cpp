#include "uwbsim/convolutional_code.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "uwbsim/errors.hpp"

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

namespace uwbsim {

namespace {

constexpr int kOutputs = 3;

// All generators tap both the newest and the oldest register bit. Flipping the
// input bit or the oldest state bit therefore complements every output, which
// lets the decoder derive all four butterfly branch metrics from one.
static_assert((ConvolutionalCode::kGenerators[0] & 0101) == 0101);
static_assert((ConvolutionalCode::kGenerators[1] & 0101) == 0101);
static_assert((ConvolutionalCode::kGenerators[2] & 0101) == 0101);

std::uint8_t output_bit(unsigned reg, std::uint8_t generator) {
  return static_cast<std::uint8_t>(std::popcount(reg & generator) & 1U);
}

std::vector<std::array<bool, 3>> make_pattern(CodeRate rate) {
  using P = std::array<bool, 3>;
  switch (rate) {
    case CodeRate::R1_3:
      return {P{true, true, true}};
    case CodeRate::R1_2:
      return {P{true, false, true}};
    case CodeRate::R11_32: {
      std::vector<P> p(11, P{true, true, true});
      p.back()[1] = false;
      return p;
    }
    case CodeRate::R5_8:
      return {P{true, false, true}, P{true, false, false}, P{true, false, true}, P{true, false, false},
              P{true, false, true}};
    case CodeRate::R3_4:
      return {P{true, false, true}, P{true, false, false}, P{false, false, true}};
  }
  throw ConfigError("unsupported code rate");
}

}  // namespace

CodeRate parse_code_rate(Rational rate) {
  for (CodeRate r : {CodeRate::R1_3, CodeRate::R1_2, CodeRate::R11_32, CodeRate::R5_8, CodeRate::R3_4}) {
    if (code_rate_value(r) == rate) return r;
  }
  throw ConfigError("unsupported code rate " + to_string(rate));
}

ConvolutionalCode::ConvolutionalCode(CodeRate rate) : rate_(rate), pattern_(make_pattern(rate)) {}

std::size_t ConvolutionalCode::encoded_length(std::size_t info_bits) const noexcept {
  const std::size_t total = info_bits + kMemory;
  const std::size_t period = pattern_.size();
  std::size_t per_period = 0;
  for (const auto& p : pattern_) per_period += static_cast<std::size_t>(p[0] + p[1] + p[2]);
  std::size_t n = (total / period) * per_period;
  for (std::size_t i = 0; i < total % period; ++i) {
    n += static_cast<std::size_t>(pattern_[i][0] + pattern_[i][1] + pattern_[i][2]);
  }
  return n;
}

std::size_t ConvolutionalCode::max_info_bits(std::size_t coded_bits) const noexcept {
  // encoded_length is monotone; start from the rate estimate and walk.
  const Rational r = code_rate_value(rate_);
  auto guess = static_cast<std::size_t>(static_cast<double>(coded_bits) * r.value());
  while (guess > 0 && encoded_length(guess) > coded_bits) --guess;
  while (encoded_length(guess + 1) <= coded_bits) ++guess;
  return guess;
}

std::vector<std::uint8_t> ConvolutionalCode::encode(std::span<const std::uint8_t> bits) const {
  static const auto kOutputTable = [] {
    std::array<std::array<std::uint8_t, kOutputs>, 2 * kNumStates> table{};
    for (unsigned reg = 0; reg < table.size(); ++reg) {
      for (std::size_t g = 0; g < kOutputs; ++g) table[reg][g] = output_bit(reg, kGenerators[g]);
    }
    return table;
  }();

  std::vector<std::uint8_t> out;
  out.reserve(encoded_length(bits.size()));
  unsigned state = 0;
  const std::size_t total = bits.size() + kMemory;
  for (std::size_t i = 0; i < total; ++i) {
    const unsigned in = i < bits.size() ? (bits[i] & 1U) : 0U;
    const unsigned reg = (in << kMemory) | state;
    const auto& keep = pattern_[i % pattern_.size()];
    for (int g = 0; g < kOutputs; ++g) {
      if (keep[static_cast<std::size_t>(g)]) out.push_back(kOutputTable[reg][static_cast<std::size_t>(g)]);
    }
    state = reg >> 1;
  }
  return out;
}

std::vector<float> ConvolutionalCode::depuncture(std::span<const float> llrs, std::size_t info_bits) const {
  if (llrs.size() != encoded_length(info_bits)) {
    throw ArgumentError("depuncture: LLR count does not match the coded length");
  }
  const std::size_t total = info_bits + kMemory;
  std::vector<float> mother(total * kOutputs, 0.0F);
  std::size_t k = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const auto& keep = pattern_[i % pattern_.size()];
    for (std::size_t g = 0; g < kOutputs; ++g) {
      if (keep[g]) mother[i * kOutputs + g] = llrs[k++];
    }
  }
  return mother;
}

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> bits, CodeRate rate) {
  return ConvolutionalCode(rate).encode(bits);
}

ViterbiDecoder::ViterbiDecoder() {
  // Butterfly j joins predecessors 2j and 2j+1 into successors j (input 0)
  // and j+32 (input 1). Branch 2j -> j: register = 2j.
  for (unsigned j = 0; j < 32; ++j) {
    const unsigned reg = 2 * j;
    for (std::size_t g = 0; g < kOutputs; ++g) {
      sign_[g][j] = output_bit(reg, ConvolutionalCode::kGenerators[g]) ? -1.0F : 1.0F;
    }
  }
}

std::vector<std::uint8_t> ViterbiDecoder::decode(std::span<const float> mother_llrs, std::size_t info_bits) {
  constexpr int S = ConvolutionalCode::kNumStates;
  const std::size_t steps = info_bits + ConvolutionalCode::kMemory;
  if (mother_llrs.size() != steps * kOutputs) {
    throw ArgumentError("viterbi: expected 3 * (info_bits + 6) mother-code LLRs");
  }
  decisions_.resize(steps);

  constexpr float kUnreachable = -1e30F;
  alignas(16) float buf_a[S];
  alignas(16) float buf_b[S];
  float* metric = buf_a;
  float* next = buf_b;
  std::fill(metric, metric + S, kUnreachable);
  metric[0] = 0.0F;

  // Butterfly j: 2j -> j (+bm), 2j+1 -> j (-bm), 2j -> j+32 (-bm), 2j+1 -> j+32 (+bm).
  for (std::size_t t = 0; t < steps; ++t) {
    const float la = mother_llrs[t * kOutputs + 0];
    const float lb = mother_llrs[t * kOutputs + 1];
    const float lc = mother_llrs[t * kOutputs + 2];
    std::uint64_t word = 0;
#if defined(__SSE2__)
    const __m128 va = _mm_set1_ps(la);
    const __m128 vb = _mm_set1_ps(lb);
    const __m128 vc = _mm_set1_ps(lc);
    for (int i = 0; i < 8; ++i) {
      const __m128 m0 = _mm_load_ps(metric + 8 * i);
      const __m128 m1 = _mm_load_ps(metric + 8 * i + 4);
      const __m128 even = _mm_shuffle_ps(m0, m1, _MM_SHUFFLE(2, 0, 2, 0));
      const __m128 odd = _mm_shuffle_ps(m0, m1, _MM_SHUFFLE(3, 1, 3, 1));
      const __m128 bm = _mm_add_ps(
          _mm_add_ps(_mm_mul_ps(_mm_load_ps(sign_[0].data() + 4 * i), va),
                     _mm_mul_ps(_mm_load_ps(sign_[1].data() + 4 * i), vb)),
          _mm_mul_ps(_mm_load_ps(sign_[2].data() + 4 * i), vc));
      const __m128 a0 = _mm_add_ps(even, bm);
      const __m128 b0 = _mm_sub_ps(odd, bm);
      const __m128 a1 = _mm_sub_ps(even, bm);
      const __m128 b1 = _mm_add_ps(odd, bm);
      _mm_store_ps(next + 4 * i, _mm_max_ps(a0, b0));
      _mm_store_ps(next + 32 + 4 * i, _mm_max_ps(a1, b1));
      word |= static_cast<std::uint64_t>(_mm_movemask_ps(_mm_cmplt_ps(a0, b0))) << (4 * i);
      word |= static_cast<std::uint64_t>(_mm_movemask_ps(_mm_cmplt_ps(a1, b1))) << (32 + 4 * i);
    }
#else
    for (int j = 0; j < 32; ++j) {
      const float bm = sign_[0][j] * la + sign_[1][j] * lb + sign_[2][j] * lc;
      const float a0 = metric[2 * j] + bm;
      const float b0 = metric[2 * j + 1] - bm;
      const float a1 = metric[2 * j] - bm;
      const float b1 = metric[2 * j + 1] + bm;
      next[j] = a0 < b0 ? b0 : a0;
      next[j + 32] = a1 < b1 ? b1 : a1;
      word |= static_cast<std::uint64_t>(a0 < b0) << j;
      word |= static_cast<std::uint64_t>(a1 < b1) << (j + 32);
    }
#endif
    decisions_[t] = word;
    if ((t & 15U) == 15U) {
      float top = next[0];
      for (int s = 1; s < S; ++s) top = std::max(top, next[s]);
      for (int s = 0; s < S; ++s) next[s] -= top;
    }
    std::swap(metric, next);
  }

  // Terminated trellis: trace back from state 0.
  std::vector<std::uint8_t> bits(steps);
  unsigned state = 0;
  for (std::size_t t = steps; t-- > 0;) {
    bits[t] = static_cast<std::uint8_t>(state >> 5);
    state = ((state & 31U) << 1) | static_cast<unsigned>((decisions_[t] >> state) & 1U);
  }
  bits.resize(info_bits);
  return bits;
}

std::vector<std::uint8_t> ViterbiDecoder::decode(const ConvolutionalCode& code, std::span<const float> llrs,
                                                 std::size_t info_bits) {
  const auto mother = code.depuncture(llrs, info_bits);
  return decode(mother, info_bits);
}

}  // namespace uwbsim

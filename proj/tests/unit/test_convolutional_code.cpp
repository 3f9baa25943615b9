#include <gtest/gtest.h>

#include <bit>

#include "uwbsim/convolutional_code.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/rng.hpp"

using namespace uwbsim;

namespace {

constexpr CodeRate kRates[] = {CodeRate::R1_3, CodeRate::R1_2, CodeRate::R11_32, CodeRate::R5_8, CodeRate::R3_4};

// Shift-register encoder written out bit by bit: the register holds the
// current input in its top bit and the six previous ones below it.
std::vector<std::uint8_t> reference_mother(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> in = bits;
  in.insert(in.end(), 6, 0);
  unsigned reg = 0;
  std::vector<std::uint8_t> out;
  for (auto b : in) {
    reg = (reg >> 1) | (static_cast<unsigned>(b) << 6);
    for (unsigned g : {0133U, 0165U, 0171U}) {
      unsigned taps = 0;
      for (int i = 0; i < 7; ++i) {
        // generator bit 6 (MSB) taps the newest input
        if ((g >> (6 - i)) & 1U) taps ^= (reg >> (6 - i)) & 1U;
      }
      out.push_back(static_cast<std::uint8_t>(taps));
    }
  }
  return out;
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1U);
  return b;
}

std::vector<float> to_llrs(const std::vector<std::uint8_t>& coded) {
  std::vector<float> l;
  for (auto c : coded) l.push_back(c ? -1.0F : 1.0F);
  return l;
}

}  // namespace

TEST(ConvolutionalCode, AllZeroInputGivesAllZeroOutput) {
  std::vector<std::uint8_t> zeros(300, 0);
  for (auto r : kRates) {
    for (auto c : encode(zeros, r)) ASSERT_EQ(c, 0);
  }
}

TEST(ConvolutionalCode, MotherCodeMatchesShiftRegister) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto bits = random_bits(rng, 1 + trial * 7);
    EXPECT_EQ(encode(bits, CodeRate::R1_3), reference_mother(bits));
  }
}

TEST(ConvolutionalCode, MotherLengthIsThreeTimesInputPlusTail) {
  const ConvolutionalCode code(CodeRate::R1_3);
  for (std::size_t n : {1U, 10U, 100U, 1234U}) EXPECT_EQ(code.encoded_length(n), 3 * (n + 6));
}

TEST(ConvolutionalCode, PuncturedLengthsFollowTheRate) {
  Rng rng(2);
  for (auto r : kRates) {
    const ConvolutionalCode code(r);
    const auto rate = code_rate_value(r);
    // Blocks that span whole puncturing periods give the exact ratio.
    std::size_t period = code.puncture_pattern().size();
    const std::size_t n = period * 40 - 6;
    const auto coded = code.encode(random_bits(rng, n));
    EXPECT_EQ(coded.size(), code.encoded_length(n));
    EXPECT_EQ(Rational(static_cast<std::int64_t>(n + 6), static_cast<std::int64_t>(coded.size())), rate);
  }
}

TEST(ConvolutionalCode, PuncturingKeepsMotherBitsInOrder) {
  Rng rng(3);
  for (auto r : kRates) {
    const ConvolutionalCode code(r);
    const auto bits = random_bits(rng, 250);
    const auto mother = reference_mother(bits);
    const auto coded = code.encode(bits);
    const auto pattern = code.puncture_pattern();
    std::vector<std::uint8_t> kept;
    for (std::size_t t = 0; t < mother.size() / 3; ++t) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (pattern[t % pattern.size()][j]) kept.push_back(mother[3 * t + j]);
      }
    }
    EXPECT_EQ(coded, kept);
  }
}

TEST(ConvolutionalCode, MaxInfoBitsFits) {
  for (auto r : kRates) {
    const ConvolutionalCode code(r);
    for (std::size_t cap : {300U, 1200U, 4800U}) {
      const auto n = code.max_info_bits(cap);
      EXPECT_LE(code.encoded_length(n), cap);
      EXPECT_GT(code.encoded_length(n + 1), cap);
    }
  }
}

TEST(ConvolutionalCode, NoiselessLoopbackTenThousandBlocks) {
  Rng rng(4);
  ViterbiDecoder dec;
  for (int block = 0; block < 10000; ++block) {
    const auto r = kRates[block % 5];
    const ConvolutionalCode code(r);
    const auto bits = random_bits(rng, 64 + rng() % 200);
    const auto decoded = dec.decode(code, to_llrs(code.encode(bits)), bits.size());
    ASSERT_EQ(decoded, bits) << "block " << block;
  }
}

TEST(ConvolutionalCode, CorrectsSparseErrors) {
  Rng rng(5);
  ViterbiDecoder dec;
  const ConvolutionalCode code(CodeRate::R1_2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto bits = random_bits(rng, 500);
    auto llrs = to_llrs(code.encode(bits));
    // One flipped bit every 40 coded bits is well within the free distance.
    for (std::size_t i = rng() % 40; i < llrs.size(); i += 40) llrs[i] = -llrs[i];
    ASSERT_EQ(dec.decode(code, llrs, bits.size()), bits);
  }
}

TEST(ConvolutionalCode, DepunctureRejectsWrongLength) {
  const ConvolutionalCode code(CodeRate::R3_4);
  std::vector<float> llrs(code.encoded_length(100) + 1, 1.0F);
  EXPECT_THROW(code.depuncture(llrs, 100), ArgumentError);
  EXPECT_EQ(code.depuncture(std::span(llrs).first(code.encoded_length(100)), 100).size(), 3U * 106U);
}

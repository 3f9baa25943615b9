#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "uwbsim/channel_model.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/phy_link.hpp"
#include "uwbsim/rng.hpp"

using namespace uwbsim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST(PhyLink, InterleaverIsAPermutationAndInverts) {
  for (std::size_t n : {100U, 200U, 300U}) {
    std::vector<std::uint8_t> idx(n);
    std::vector<float> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = static_cast<std::uint8_t>(i % 251);
      f[i] = static_cast<float>(i);
    }
    const auto inter = interleave(idx);
    // bit i goes to (i mod 10) * (n / 10) + i / 10
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(inter[(i % 10) * (n / 10) + i / 10], idx[i]);
    std::vector<float> moved(n);
    for (std::size_t i = 0; i < n; ++i) moved[(i % 10) * (n / 10) + i / 10] = f[i];
    EXPECT_EQ(deinterleave(moved), f);
  }
  EXPECT_THROW(interleave(std::vector<std::uint8_t>(15)), ArgumentError);
}

TEST(PhyLink, BandPlans) {
  const auto f = BandPlan::fixed(2);
  EXPECT_FALSE(f.hopping());
  for (std::size_t s = 0; s < 10; ++s) EXPECT_EQ(f.band_for_slot(s), 2);
  const auto t = BandPlan::tfc();
  EXPECT_TRUE(t.hopping());
  EXPECT_EQ(t.band_for_slot(0), 1);
  EXPECT_EQ(t.band_for_slot(1), 2);
  EXPECT_EQ(t.band_for_slot(2), 3);
  EXPECT_EQ(t.band_for_slot(3), 1);
  EXPECT_THROW(BandPlan::fixed(0), ArgumentError);
  EXPECT_THROW(BandPlan::tfc({1, 4}), ArgumentError);
}

TEST(PhyLink, FrameSizes) {
  for (const auto& m : mcs_table()) {
    LinkSimulator sim(m, flat_responses(), BandPlan::fixed(1));
    const std::size_t payload_symbols = kSlotsPerFrame / (m.tds ? 2 : 1);
    EXPECT_EQ(sim.coded_bits_per_frame(), payload_symbols * static_cast<std::size_t>(m.coded_bits_per_symbol()));
    EXPECT_GT(sim.info_bits_per_frame(), 0U);
  }
}

TEST(PhyLink, NoiselessLoopbackEveryMcs) {
  const auto r = generate_realization(ChannelModelParams::preset(ChannelModelId::CM1), 17);
  for (const auto& m : mcs_table()) {
    for (const auto& plan : {BandPlan::fixed(1), BandPlan::fixed(3), BandPlan::tfc()}) {
      LinkSimulator flat(m, flat_responses(), plan);
      LinkSimulator faded(m, band_responses(r), plan);
      Rng rng(1);
      EXPECT_EQ(flat.run_frames(3, kInf, rng).bit_errors, 0U) << m.label;
      EXPECT_EQ(faded.run_frames(3, kInf, rng).bit_errors, 0U) << m.label;
    }
  }
}

TEST(PhyLink, SimulateLinkIsDeterministic) {
  const auto r = generate_realization(ChannelModelParams::preset(ChannelModelId::CM1), 3);
  const auto& m = mcs_by_label("320");
  const auto a = simulate_link(m, r, BandPlan::tfc(), 4.0, 100, 200000, 77);
  const auto b = simulate_link(m, r, BandPlan::tfc(), 4.0, 100, 200000, 77);
  EXPECT_EQ(a, b);
  EXPECT_GT(a.bits_tested, 0U);
  const auto c = simulate_link(m, r, BandPlan::tfc(), 4.0, 100, 200000, 78);
  EXPECT_NE(a, c);
}

TEST(PhyLink, CensoringFlag) {
  const auto& m = mcs_by_label("480");
  const auto p = simulate_link(m, flat_responses(), BandPlan::fixed(1), 30.0, 10, 50000, 1);
  EXPECT_TRUE(p.censored);
  EXPECT_EQ(p.bit_errors, 0U);
  EXPECT_GE(p.bits_tested, 50000U);
  const auto q = simulate_link(m, flat_responses(), BandPlan::fixed(1), 0.0, 10, 50000, 1);
  EXPECT_FALSE(q.censored);
  EXPECT_GE(q.bit_errors, 10U);
}

TEST(PhyLink, UncodedQpskMatchesQFunction) {
  // 200 Mbit/s is QPSK with time spreading: two combined copies double the SNR.
  const auto& m = mcs_by_label("200");
  LinkOptions opt;
  opt.uncoded = true;
  for (double esn0 : {-2.0, 0.0, 2.0, 4.0}) {
    const auto p = simulate_link(m, flat_responses(), BandPlan::fixed(1), esn0, 2000, 4'000'000, 5, opt);
    const double snr = std::pow(10.0, esn0 / 10.0);
    const double expected = q_function(std::sqrt(2.0 * snr));
    const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(p.bits_tested));
    EXPECT_NEAR(p.ber(), expected, 3.0 * sigma) << esn0 << " dB";
  }
}

TEST(PhyLink, UncodedFdsAndTdsBothCombine) {
  // 53.3 Mbit/s spreads in both domains: four copies.
  const auto& m = mcs_by_label("53.3");
  LinkOptions opt;
  opt.uncoded = true;
  const double esn0 = -4.0;
  const auto p = simulate_link(m, flat_responses(), BandPlan::fixed(2), esn0, 2000, 4'000'000, 6, opt);
  const double expected = q_function(std::sqrt(4.0 * std::pow(10.0, esn0 / 10.0)));
  const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(p.bits_tested));
  EXPECT_NEAR(p.ber(), expected, 3.0 * sigma);
}

TEST(PhyLink, CodedBerFallsWithSnr) {
  for (const char* label : {"80", "320", "480"}) {
    const auto& m = mcs_by_label(label);
    double prev = 1.0;
    for (double esn0 : {-2.0, 0.0, 2.0, 4.0}) {
      const auto p = simulate_link(m, flat_responses(), BandPlan::fixed(1), esn0, 500, 2'000'000, 9);
      EXPECT_LE(p.ber(), prev) << label << " at " << esn0;
      prev = p.ber();
    }
  }
}

TEST(PhyLink, TfcOnIdenticalFlatBandsMatchesFixedBand) {
  const auto& m = mcs_by_label("400");
  const auto fixed = simulate_link(m, flat_responses(), BandPlan::fixed(1), 3.5, 1000, 10'000'000, 21);
  const auto tfc = simulate_link(m, flat_responses(), BandPlan::tfc(), 3.5, 1000, 10'000'000, 22);
  // Decoded errors arrive in bursts, so a plain binomial bound is too tight.
  EXPECT_NEAR(fixed.ber(), tfc.ber(), 0.3 * fixed.ber());
}

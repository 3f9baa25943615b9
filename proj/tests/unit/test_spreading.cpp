#include <gtest/gtest.h>

#include <cmath>

#include "uwbsim/errors.hpp"
#include "uwbsim/rng.hpp"
#include "uwbsim/spreading.hpp"

using namespace uwbsim;

namespace {

std::vector<Cplx> qpsk_symbols(Rng& rng, std::size_t n) {
  const double a = 1.0 / std::sqrt(2.0);
  std::vector<Cplx> s(n);
  for (auto& x : s) x = Cplx(rng() & 1U ? a : -a, rng() & 1U ? a : -a);
  return s;
}

// Post-combining SNR estimate: mean |z/g - x|^2 against the known symbols.
double combined_error_power(bool fds, bool tds, double noise_var, std::uint64_t seed) {
  Rng rng(seed);
  NormalSampler gauss;
  const auto sym = qpsk_symbols(rng, payload_per_symbol(fds) * 2000);
  const auto grid = spread(sym, fds, tds);
  std::vector<Cplx> rx(grid.tones.size());
  const std::vector<Cplx> h(grid.tones.size(), Cplx(1.0, 0.0));
  const double sd = std::sqrt(noise_var / 2.0);
  for (std::size_t i = 0; i < rx.size(); ++i) rx[i] = grid.tones[i] + Cplx(sd * gauss(rng), sd * gauss(rng));
  const auto comb = despread(rx, h, fds, tds);
  double err = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) err += std::norm(comb[i].z / comb[i].gain - sym[i]);
  return err / static_cast<double>(sym.size());
}

}  // namespace

TEST(Spreading, IdentityLayoutWithoutSpreading) {
  Rng rng(1);
  const auto s = qpsk_symbols(rng, 300);
  const auto g = spread(s, false, false);
  EXPECT_EQ(g.num_symbols(), 3U);
  EXPECT_EQ(g.tones, s);
}

TEST(Spreading, FdsCarriesFiftyPayloadSymbols) {
  Rng rng(2);
  const auto s = qpsk_symbols(rng, 100);
  const auto g = spread(s, true, false);
  ASSERT_EQ(g.num_symbols(), 2U);
  for (std::size_t sym = 0; sym < 2; ++sym) {
    const auto t = g.symbol(sym);
    for (std::size_t i = 0; i < 50; ++i) {
      EXPECT_EQ(t[i], s[sym * 50 + i]);
      EXPECT_EQ(t[i + 50], s[sym * 50 + i]);
    }
  }
}

TEST(Spreading, TdsRepeatsEachSymbol) {
  Rng rng(3);
  const auto s = qpsk_symbols(rng, 200);
  const auto g = spread(s, false, true);
  ASSERT_EQ(g.num_symbols(), 4U);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(g.symbol(0)[i], g.symbol(1)[i]);
    EXPECT_EQ(g.symbol(2)[i], g.symbol(3)[i]);
  }
}

TEST(Spreading, SizeMismatchIsRejected) {
  EXPECT_THROW(spread(std::vector<Cplx>(99), false, false), ArgumentError);
  EXPECT_THROW(spread(std::vector<Cplx>(75), true, false), ArgumentError);
}

TEST(Spreading, MaximumRatioCombiningGainsThreeDecibels) {
  const double n0 = 0.5;
  const double plain = combined_error_power(false, false, n0, 10);
  for (auto [fds, tds] : {std::pair{true, false}, std::pair{false, true}}) {
    const double spread_err = combined_error_power(fds, tds, n0, 11);
    EXPECT_NEAR(10.0 * std::log10(plain / spread_err), 10.0 * std::log10(2.0), 0.1);
  }
  const double both = combined_error_power(true, true, n0, 12);
  EXPECT_NEAR(10.0 * std::log10(plain / both), 10.0 * std::log10(4.0), 0.1);
}

TEST(Spreading, CombiningWeightsByChannel) {
  // Two copies through different gains: z = sum conj(h) y, gain = sum |h|^2.
  Rng rng(4);
  const auto s = qpsk_symbols(rng, 50);
  const auto g = spread(s, true, false);
  std::vector<Cplx> h(100), rx(100);
  for (std::size_t i = 0; i < 100; ++i) {
    h[i] = Cplx(0.2 + uniform01(rng), uniform01(rng) - 0.5);
    rx[i] = h[i] * g.tones[i];
  }
  const auto c = despread(rx, h, true, false);
  ASSERT_EQ(c.size(), 50U);
  for (std::size_t i = 0; i < 50; ++i) {
    const double gain = std::norm(h[i]) + std::norm(h[i + 50]);
    EXPECT_NEAR(c[i].gain, gain, 1e-12);
    EXPECT_NEAR(std::abs(c[i].z - gain * s[i]), 0.0, 1e-12);
  }
}

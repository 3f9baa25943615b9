#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "uwbsim/channel_model.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/ofdm.hpp"
#include "uwbsim/rng.hpp"

using namespace uwbsim;

namespace {

// Direct evaluation of sum_taps g * exp(-j 2 pi f tau) at absolute frequency f.
std::complex<double> direct_sum(const ChannelRealization& r, double f_hz) {
  double re = 0.0, im = 0.0;
  for (const auto& t : r.taps) {
    const double phase = 2.0 * std::numbers::pi * f_hz * t.delay_ns * 1e-9;
    re += t.gain * std::cos(phase);
    im -= t.gain * std::sin(phase);
  }
  return {re * r.shadowing_gain, im * r.shadowing_gain};
}

ChannelRealization taps(std::vector<Tap> t, double shadowing = 1.0) {
  ChannelRealization r;
  r.taps = std::move(t);
  r.shadowing_gain = shadowing;
  return r;
}

}  // namespace

TEST(ChannelModel, PresetsValidateAndParse) {
  for (auto id : {ChannelModelId::CM1, ChannelModelId::CM2, ChannelModelId::CM3, ChannelModelId::CM4}) {
    const auto p = ChannelModelParams::preset(id);
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.cm_id, id);
    EXPECT_EQ(parse_channel_model(to_string(id)), id);
  }
  EXPECT_THROW(parse_channel_model("CM5"), ArgumentError);
}

TEST(ChannelModel, InvalidParametersAreRejected) {
  auto p = ChannelModelParams::preset(ChannelModelId::CM1);
  p.cluster_arrival_rate = 0.0;
  EXPECT_THROW(generate_realization(p, 1), ParameterError);
  p = ChannelModelParams::preset(ChannelModelId::CM1);
  p.ray_decay_ns = -1.0;
  EXPECT_THROW(p.validate(), ParameterError);
  p = ChannelModelParams::preset(ChannelModelId::CM1);
  p.shadowing_db = -0.1;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(ChannelModel, GenerationIsDeterministic) {
  const auto p = ChannelModelParams::preset(ChannelModelId::CM1);
  EXPECT_EQ(generate_realization(p, 7), generate_realization(p, 7));
  EXPECT_NE(generate_realization(p, 7), generate_realization(p, 8));
}

TEST(ChannelModel, RealizationInvariants) {
  for (auto id : {ChannelModelId::CM1, ChannelModelId::CM2, ChannelModelId::CM3, ChannelModelId::CM4}) {
    const auto p = ChannelModelParams::preset(id);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto r = generate_realization(p, seed);
      ASSERT_FALSE(r.taps.empty());
      EXPECT_EQ(r.seed, seed);
      EXPECT_GT(r.shadowing_gain, 0.0);
      EXPECT_NEAR(r.energy(), 1.0, 1e-9);
      for (std::size_t i = 0; i < r.taps.size(); ++i) {
        EXPECT_GE(r.taps[i].delay_ns, 0.0);
        if (i > 0) EXPECT_GE(r.taps[i].delay_ns, r.taps[i - 1].delay_ns);
      }
    }
  }
}

TEST(ChannelModel, ShadowingIsLogNormal) {
  const auto p = ChannelModelParams::preset(ChannelModelId::CM2);
  double s1 = 0.0, s2 = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double db = 20.0 * std::log10(generate_realization(p, 1000 + i).shadowing_gain);
    s1 += db;
    s2 += db * db;
  }
  const double mean = s1 / n;
  EXPECT_NEAR(mean, 0.0, 0.25);
  EXPECT_NEAR(std::sqrt(s2 / n - mean * mean), p.shadowing_db, 0.25);
  EXPECT_DOUBLE_EQ(without_shadowing(generate_realization(p, 1)).shadowing_gain, 1.0);
}

TEST(ChannelModel, EnsembleStatsSimpleCases) {
  const auto one = taps({{0.0, 1.0}});
  auto s = ensemble_stats(std::span(&one, 1));
  EXPECT_DOUBLE_EQ(s.mean_excess_delay_ns, 0.0);
  EXPECT_DOUBLE_EQ(s.rms_delay_spread_ns, 0.0);
  EXPECT_EQ(s.num_realizations, 1U);

  const auto two = taps({{0.0, std::sqrt(0.5)}, {10.0, -std::sqrt(0.5)}});
  s = ensemble_stats(std::span(&two, 1));
  EXPECT_NEAR(s.mean_excess_delay_ns, 5.0, 1e-12);
  EXPECT_NEAR(s.rms_delay_spread_ns, 5.0, 1e-12);

  EXPECT_THROW(ensemble_stats({}), ArgumentError);
}

TEST(ChannelModel, EnsembleStatsNearTableValues) {
  struct Case {
    ChannelModelId id;
    double mean, rms;
  };
  for (const auto& c : {Case{ChannelModelId::CM1, 5.05, 5.28}, Case{ChannelModelId::CM2, 10.38, 8.03},
                        Case{ChannelModelId::CM3, 14.08, 14.28}}) {
    const auto p = ChannelModelParams::preset(c.id);
    std::vector<ChannelRealization> ens;
    for (std::uint64_t i = 0; i < 100; ++i) ens.push_back(generate_realization(p, derive_seed(42, "ens", {i})));
    const auto s = ensemble_stats(ens);
    EXPECT_NEAR(s.mean_excess_delay_ns, c.mean, 0.15 * c.mean) << to_string(c.id);
    EXPECT_NEAR(s.rms_delay_spread_ns, c.rms, 0.15 * c.rms) << to_string(c.id);
  }
}

TEST(ChannelModel, SingleTapIsFlat) {
  const auto r = taps({{0.0, 1.0}});
  for (int band = 1; band <= kNumBands; ++band) {
    for (int n : {kFftSize, kNumDataTones}) {
      const auto h = frequency_response(r, band, n);
      ASSERT_EQ(h.size(), static_cast<std::size_t>(n));
      for (const auto& v : h) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-12);
    }
  }
}

TEST(ChannelModel, FrequencyResponseMatchesDirectSum) {
  const auto p = ChannelModelParams::preset(ChannelModelId::CM1);
  std::vector<ChannelRealization> cases = {taps({{0.0, 0.8}, {3.7, -0.6}}, 1.3)};
  for (std::uint64_t seed = 0; seed < 10; ++seed) cases.push_back(generate_realization(p, seed));
  for (const auto& r : cases) {
    for (int band = 1; band <= kNumBands; ++band) {
      const auto h = frequency_response(r, band, kFftSize);
      const double fc = kBandCenterMHz[static_cast<std::size_t>(band - 1)] * 1e6;
      for (int k = -64; k < 64; ++k) {
        const auto ref = direct_sum(r, fc + k * 528e6 / 128.0);
        ASSERT_NEAR(std::abs(h[static_cast<std::size_t>(k + 64)] - ref), 0.0, 1e-9);
      }
      const auto d = frequency_response(r, band, kNumDataTones);
      const auto idx = data_tone_indices();
      for (std::size_t i = 0; i < d.size(); ++i) {
        ASSERT_NEAR(std::abs(d[i] - h[static_cast<std::size_t>(idx[i] + 64)]), 0.0, 1e-12);
      }
    }
  }
}

TEST(ChannelModel, ParsevalOnSampleGridTaps) {
  // Delays on the 1/528 MHz sample grid make the 128 tone phases orthogonal.
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Tap> t;
    double energy = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double g = uniform01(rng) - 0.5;
      t.push_back({i * 1e3 / 528.0 * (1 + trial % 3), g});
      energy += g * g;
    }
    const double shadow = 0.5 + uniform01(rng);
    const auto r = taps(t, shadow);
    for (int band = 1; band <= kNumBands; ++band) {
      double mean = 0.0;
      for (const auto& v : frequency_response(r, band, kFftSize)) mean += std::norm(v);
      mean /= kFftSize;
      EXPECT_NEAR(mean, energy * shadow * shadow, 0.02 * energy * shadow * shadow);
    }
  }
}

TEST(ChannelModel, BandsDiffer) {
  const auto r = generate_realization(ChannelModelParams::preset(ChannelModelId::CM1), 3);
  EXPECT_NE(frequency_response(r, 1, kNumDataTones), frequency_response(r, 2, kNumDataTones));
  EXPECT_NE(frequency_response(r, 2, kNumDataTones), frequency_response(r, 3, kNumDataTones));
}

TEST(ChannelModel, FrequencyResponseArgumentErrors) {
  const auto r = taps({{0.0, 1.0}});
  EXPECT_THROW(frequency_response(r, 0, kFftSize), ArgumentError);
  EXPECT_THROW(frequency_response(r, 4, kFftSize), ArgumentError);
  EXPECT_THROW(frequency_response(r, 1, 64), ArgumentError);
}

TEST(ChannelModel, DataToneLayout) {
  const auto idx = data_tone_indices();
  ASSERT_EQ(idx.size(), static_cast<std::size_t>(kNumDataTones));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_NE(idx[i], 0);
    EXPECT_LE(std::abs(idx[i]), 56);
    EXPECT_NE(std::abs(idx[i]) % 10, 5);
    if (i > 0) EXPECT_LT(idx[i - 1], idx[i]);
  }
}

TEST(ChannelModel, WriteRealizationRoundTrips) {
  const auto r = generate_realization(ChannelModelParams::preset(ChannelModelId::CM1), 9);
  std::ostringstream os;
  write_realization(os, r);
  std::istringstream in(os.str());
  std::size_t i = 0;
  for (double d, g; in >> d >> g; ++i) {
    ASSERT_LT(i, r.taps.size());
    EXPECT_EQ(d, r.taps[i].delay_ns);
    EXPECT_EQ(g, r.taps[i].gain * r.shadowing_gain);
  }
  EXPECT_EQ(i, r.taps.size());
}

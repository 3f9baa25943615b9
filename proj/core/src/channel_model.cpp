#include "uwbsim/channel_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "uwbsim/errors.hpp"
#include "uwbsim/ofdm.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

namespace {

constexpr std::array<int, kNumDataTones> make_data_tones() {
  std::array<int, kNumDataTones> tones{};
  std::size_t n = 0;
  for (int k = -56; k <= 56; ++k) {
    const int a = k < 0 ? -k : k;
    if (k == 0 || a % 10 == 5) continue;
    tones[n++] = k;
  }
  return tones;
}

constexpr auto kDataTones = make_data_tones();

// Excess-delay cut-offs, in multiples of the cluster/ray decay constants.
constexpr double kClusterHorizon = 10.0;
constexpr double kRayHorizon = 10.0;

}  // namespace

std::span<const int> data_tone_indices() noexcept { return kDataTones; }

std::string to_string(ChannelModelId id) { return "CM" + std::to_string(static_cast<int>(id)); }

ChannelModelId parse_channel_model(std::string_view text) {
  if (text.size() == 3 && (text[0] == 'C' || text[0] == 'c') && (text[1] == 'M' || text[1] == 'm')) {
    const int n = text[2] - '0';
    if (n >= 1 && n <= 4) return static_cast<ChannelModelId>(n);
  }
  throw ArgumentError("unknown channel model '" + std::string(text) + "' (expected CM1..CM4)");
}

void ChannelModelParams::validate() const {
  if (!(cluster_arrival_rate > 0.0) || !(ray_arrival_rate > 0.0)) {
    throw ParameterError("channel model arrival rates must be strictly positive");
  }
  if (!(cluster_decay_ns > 0.0) || !(ray_decay_ns > 0.0)) {
    throw ParameterError("channel model decay constants must be strictly positive");
  }
  if (!(cluster_fading_db >= 0.0) || !(ray_fading_db >= 0.0) || !(shadowing_db >= 0.0)) {
    throw ParameterError("channel model log-normal spreads must be nonnegative");
  }
}

ChannelModelParams ChannelModelParams::preset(ChannelModelId id) {
  // sigma_1 = sigma_2 = 3.3941 dB and sigma_x = 3 dB for every class.
  switch (id) {
    case ChannelModelId::CM1:
      return {id, 0.0233, 2.5, 7.1, 4.3, 3.3941, 3.3941, 3.0};
    case ChannelModelId::CM2:
      return {id, 0.4, 0.5, 5.5, 6.7, 3.3941, 3.3941, 3.0};
    case ChannelModelId::CM3:
      return {id, 0.0667, 2.1, 14.0, 7.9, 3.3941, 3.3941, 3.0};
    case ChannelModelId::CM4:
      return {id, 0.0667, 2.1, 24.0, 12.0, 3.3941, 3.3941, 3.0};
  }
  throw ArgumentError("unknown channel model id");
}

double ChannelRealization::energy() const noexcept {
  double e = 0.0;
  for (const auto& t : taps) e += t.gain * t.gain;
  return e;
}

ChannelRealization without_shadowing(ChannelRealization r) {
  r.shadowing_gain = 1.0;
  return r;
}

ChannelRealization generate_realization(const ChannelModelParams& cm, std::uint64_t seed) {
  cm.validate();

  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> cluster_gap(cm.cluster_arrival_rate);
  std::exponential_distribution<double> ray_gap(cm.ray_arrival_rate);
  std::bernoulli_distribution sign(0.5);

  // Mean of the dB-domain fading chosen so that E[|alpha|^2] follows the
  // double-exponential profile exactly.
  const double ln10 = std::numbers::ln10;
  const double mu_offset =
      (cm.cluster_fading_db * cm.cluster_fading_db + cm.ray_fading_db * cm.ray_fading_db) * ln10 / 20.0;

  ChannelRealization out;
  out.cm_id = cm.cm_id;
  out.seed = seed;

  for (double cluster_t = 0.0; cluster_t < kClusterHorizon * cm.cluster_decay_ns;
       cluster_t += cluster_gap(rng)) {
    const double cluster_fading = cm.cluster_fading_db * gauss(rng);
    for (double ray_t = 0.0; ray_t < kRayHorizon * cm.ray_decay_ns; ray_t += ray_gap(rng)) {
      const double mu_db =
          -10.0 * cluster_t / cm.cluster_decay_ns / ln10 - 10.0 * ray_t / cm.ray_decay_ns / ln10 - mu_offset;
      const double ray_fading = mu_db + cm.ray_fading_db * gauss(rng);
      const double polarity = sign(rng) ? 1.0 : -1.0;
      out.taps.push_back({cluster_t + ray_t, polarity * std::pow(10.0, (cluster_fading + ray_fading) / 20.0)});
    }
  }

  std::stable_sort(out.taps.begin(), out.taps.end(),
                   [](const Tap& a, const Tap& b) { return a.delay_ns < b.delay_ns; });

  const double norm = 1.0 / std::sqrt(out.energy());
  for (auto& t : out.taps) t.gain *= norm;

  out.shadowing_gain = std::pow(10.0, cm.shadowing_db * gauss(rng) / 20.0);
  return out;
}

EnsembleStats ensemble_stats(std::span<const ChannelRealization> realizations) {
  if (realizations.empty()) throw ArgumentError("ensemble_stats needs at least one realization");

  EnsembleStats stats;
  stats.num_realizations = realizations.size();
  for (const auto& r : realizations) {
    if (r.taps.empty()) throw ArgumentError("realization without taps");
    const double t0 = r.taps.front().delay_ns;
    double p = 0.0, m1 = 0.0, m2 = 0.0;
    for (const auto& t : r.taps) {
      const double pw = t.gain * t.gain;
      const double d = t.delay_ns - t0;
      p += pw;
      m1 += pw * d;
      m2 += pw * d * d;
    }
    const double mean = m1 / p;
    stats.mean_excess_delay_ns += mean;
    stats.rms_delay_spread_ns += std::sqrt(std::max(0.0, m2 / p - mean * mean));
  }
  const auto n = static_cast<double>(realizations.size());
  stats.mean_excess_delay_ns /= n;
  stats.rms_delay_spread_ns /= n;
  return stats;
}

std::vector<std::complex<double>> frequency_response(const ChannelRealization& r, int band_index,
                                                     int num_subcarriers) {
  if (band_index < 1 || band_index > kNumBands) {
    throw ArgumentError("band index " + std::to_string(band_index) + " outside 1.." + std::to_string(kNumBands));
  }
  std::vector<int> tones;
  if (num_subcarriers == kFftSize) {
    for (int k = -kFftSize / 2; k < kFftSize / 2; ++k) tones.push_back(k);
  } else if (num_subcarriers == kNumDataTones) {
    const auto d = data_tone_indices();
    tones.assign(d.begin(), d.end());
  } else {
    throw ArgumentError("num_subcarriers must be 128 or 100");
  }

  const double fc = kBandCenterMHz[static_cast<std::size_t>(band_index - 1)];
  const int k0 = tones.front();
  std::vector<int> slot(static_cast<std::size_t>(tones.back() - k0 + 1), -1);
  for (std::size_t i = 0; i < tones.size(); ++i) slot[static_cast<std::size_t>(tones[i] - k0)] = static_cast<int>(i);

  // Tones are evenly spaced, so each tap's phasor advances by a fixed rotation
  // from one tone index to the next.
  std::vector<std::complex<double>> h(tones.size());
  for (const auto& t : r.taps) {
    // MHz * ns = 1e-3 cycles
    const double cycles_per_mhz = -2.0 * std::numbers::pi * t.delay_ns * 1e-3;
    const auto start = std::polar(t.gain, cycles_per_mhz * (fc + k0 * kToneSpacingMHz));
    const auto step = std::polar(1.0, cycles_per_mhz * kToneSpacingMHz);
    double re = start.real(), im = start.imag();
    for (const int idx : slot) {
      if (idx >= 0) h[static_cast<std::size_t>(idx)] += std::complex<double>(re, im);
      const double next_re = re * step.real() - im * step.imag();
      im = re * step.imag() + im * step.real();
      re = next_re;
    }
  }
  for (auto& x : h) x *= r.shadowing_gain;
  return h;
}

void write_realization(std::ostream& os, const ChannelRealization& r) {
  char buf[64];
  for (const auto& t : r.taps) {
    auto [p1, e1] = std::to_chars(buf, buf + sizeof buf, t.delay_ns);
    *p1++ = ' ';
    auto [p2, e2] = std::to_chars(p1, buf + sizeof buf, t.gain * r.shadowing_gain);
    *p2++ = '\n';
    os.write(buf, p2 - buf);
  }
}

}  // namespace uwbsim

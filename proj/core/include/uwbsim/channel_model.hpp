#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uwbsim {

enum class ChannelModelId { CM1 = 1, CM2 = 2, CM3 = 3, CM4 = 4 };

std::string to_string(ChannelModelId id);
ChannelModelId parse_channel_model(std::string_view text);

/// Modified Saleh-Valenzuela parameters. Rates in 1/ns, decay constants in ns,
/// log-normal spreads in dB.
struct ChannelModelParams {
  ChannelModelId cm_id = ChannelModelId::CM1;
  double cluster_arrival_rate = 0.0;
  double ray_arrival_rate = 0.0;
  double cluster_decay_ns = 0.0;
  double ray_decay_ns = 0.0;
  double cluster_fading_db = 0.0;
  double ray_fading_db = 0.0;
  double shadowing_db = 0.0;

  /// Throws ParameterError unless rates/decays are > 0 and spreads are >= 0.
  void validate() const;

  /// The IEEE 802.15.3a channel-modelling sub-committee parameter set.
  static ChannelModelParams preset(ChannelModelId id);
};

struct Tap {
  double delay_ns = 0.0;
  double gain = 0.0;

  friend bool operator==(const Tap&, const Tap&) = default;
};

/// One impulse response: taps sorted by delay with unit total energy, plus the
/// log-normal shadowing gain that scales the whole response.
struct ChannelRealization {
  ChannelModelId cm_id = ChannelModelId::CM1;
  std::vector<Tap> taps;
  double shadowing_gain = 1.0;
  std::uint64_t seed = 0;

  double energy() const noexcept;

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

/// Copy of `r` with the shadowing gain removed (set to 1).
ChannelRealization without_shadowing(ChannelRealization r);

ChannelRealization generate_realization(const ChannelModelParams& cm, std::uint64_t seed);

struct EnsembleStats {
  double mean_excess_delay_ns = 0.0;
  double rms_delay_spread_ns = 0.0;
  std::size_t num_realizations = 0;
};

/// Energy-weighted delay moments per realization, averaged over the list.
EnsembleStats ensemble_stats(std::span<const ChannelRealization> realizations);

/// Per-tone response of sub-band `band_index` (1..3). `num_subcarriers` selects
/// the full 128-point grid or the 100 data tones. Includes the shadowing gain.
std::vector<std::complex<double>> frequency_response(const ChannelRealization& r, int band_index,
                                                     int num_subcarriers);

/// Plain-text dump, one "delay_ns gain" row per tap.
void write_realization(std::ostream& os, const ChannelRealization& r);

}  // namespace uwbsim

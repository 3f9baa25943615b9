#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uwbsim/channel_model.hpp"
#include "uwbsim/convolutional_code.hpp"
#include "uwbsim/mcs.hpp"
#include "uwbsim/modulation.hpp"
#include "uwbsim/ofdm.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

/// Transmitted OFDM symbols per simulated frame; a multiple of the TFC period
/// and of the TDS repetition factor.
inline constexpr std::size_t kSlotsPerFrame = 24;

/// Which sub-band each transmitted OFDM symbol uses: one fixed band for the
/// cross-layer mode, or a cyclic time-frequency code for the WiMedia baseline.
class BandPlan {
 public:
  static BandPlan fixed(int band);
  /// Default pattern hops 1 -> 2 -> 3 every OFDM symbol.
  static BandPlan tfc(std::vector<int> pattern = {1, 2, 3});

  int band_for_slot(std::size_t slot) const noexcept { return pattern_[slot % pattern_.size()]; }
  bool hopping() const noexcept { return pattern_.size() > 1; }
  const std::vector<int>& pattern() const noexcept { return pattern_; }

 private:
  explicit BandPlan(std::vector<int> pattern);
  std::vector<int> pattern_;
};

struct BerPoint {
  double snr_db = 0.0;  // Es/N0 per data tone
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_tested = 0;
  bool censored = false;  // stopped at max_bits before reaching min_errors

  double ber() const noexcept {
    return bits_tested ? static_cast<double>(bit_errors) / static_cast<double>(bits_tested) : 0.0;
  }
  friend bool operator==(const BerPoint&, const BerPoint&) = default;
};

/// Per-band responses on the 100 data tones, index 0 = band 1.
using BandResponses = std::array<std::vector<Cplx>, kNumBands>;

BandResponses band_responses(const ChannelRealization& r);
/// H_k = 1 on every tone of every band.
BandResponses flat_responses();

/// Per-OFDM-symbol block interleaver over `bits.size()` coded bits (a multiple
/// of 10): bit i goes to position (i mod 10) * (n / 10) + i / 10.
std::vector<std::uint8_t> interleave(std::span<const std::uint8_t> bits);
std::vector<float> deinterleave(std::span<const float> llrs);

struct LinkOptions {
  /// Test hook: bypass the convolutional code and count raw hard-decision errors.
  bool uncoded = false;
};

struct LinkCounts {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;

  LinkCounts& operator+=(const LinkCounts& o) noexcept {
    bit_errors += o.bit_errors;
    bits += o.bits;
    return *this;
  }
};

/// Frame-level transmitter/channel/receiver loop for one link. Holds decoder
/// work buffers; use one instance per thread.
class LinkSimulator {
 public:
  LinkSimulator(const McsConfig& mcs, BandResponses channel, BandPlan plan, LinkOptions options = {});

  /// Simulates `frames` frames at `esn0_db` (+inf disables noise).
  LinkCounts run_frames(std::size_t frames, double esn0_db, Rng& rng);

  std::size_t info_bits_per_frame() const noexcept { return info_bits_; }
  std::size_t coded_bits_per_frame() const noexcept { return coded_capacity_; }

 private:
  LinkCounts run_one(double noise_std, Rng& rng);

  McsConfig mcs_;
  BandResponses channel_;
  BandPlan plan_;
  LinkOptions options_;
  ConvolutionalCode code_;
  ViterbiDecoder decoder_;
  NormalSampler gauss_;
  std::size_t payload_symbols_ = 0;
  std::size_t coded_capacity_ = 0;
  std::size_t info_bits_ = 0;
};

/// Runs frames until `min_errors` bit errors or `max_bits` payload bits,
/// whichever comes first (at least one frame). Deterministic in `seed`.
BerPoint simulate_link(const McsConfig& mcs, const ChannelRealization& realization, const BandPlan& plan,
                       double esn0_db, std::uint64_t min_errors, std::uint64_t max_bits, std::uint64_t seed,
                       LinkOptions options = {});

/// Same, for explicit per-band responses (flat channels, test fixtures).
BerPoint simulate_link(const McsConfig& mcs, const BandResponses& channel, const BandPlan& plan, double esn0_db,
                       std::uint64_t min_errors, std::uint64_t max_bits, std::uint64_t seed,
                       LinkOptions options = {});

}  // namespace uwbsim

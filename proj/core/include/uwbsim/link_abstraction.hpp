#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "uwbsim/channel_model.hpp"
#include "uwbsim/mcs.hpp"
#include "uwbsim/modulation.hpp"
#include "uwbsim/ofdm.hpp"
#include "uwbsim/phy_link.hpp"
#include "uwbsim/user.hpp"

namespace uwbsim {

double to_db(double linear) noexcept;
double from_db(double db) noexcept;

/// Per-tone SINR of one user on one band, linear units.
struct SinrVector {
  std::vector<double> values;
  int band = 0;
  UserId user = 0;
};

/// SINR_k = |H_k|^2 * 10^(esn0_db/10). Interference is zero: users never
/// share a band at the same time.
SinrVector subcarrier_sinr(std::span<const Cplx> h, double esn0_db);

/// Exponential effective SINR, -lambda * ln(mean_k exp(-SINR_k / lambda)),
/// evaluated in linear units with a shifted log-sum-exp so that very small
/// lambda stays finite. Throws ParameterError for lambda <= 0 and
/// ArgumentError for an empty vector.
double effective_sinr(std::span<const double> sinr, double lambda);
inline double effective_sinr(const SinrVector& s, double lambda) { return effective_sinr(s.values, lambda); }

/// Per-MCS scaling factor, keyed by the MCS label.
class LambdaTable {
 public:
  void set(const std::string& mcs_label, double lambda);
  double at(const McsConfig& mcs) const;
  bool contains(const std::string& mcs_label) const { return values_.contains(mcs_label); }
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

/// Monte-Carlo AWGN BER curve of one MCS, with a log-domain lookup.
struct AwgnReference {
  std::string mcs_label;
  std::vector<BerPoint> points;  // raw counts, ascending SNR
  std::vector<double> ber;       // after isotonic (non-increasing) cleanup

  /// Log-linear interpolation in BER, clamped to the grid ends. Zero-BER
  /// points are floored at kBerFloor.
  double ber_at(double snr_db) const;

  static constexpr double kBerFloor = 1e-12;
};

struct AwgnOptions {
  std::uint64_t min_errors = 500;
  std::uint64_t max_bits = 20'000'000;
  std::uint64_t seed = 1;
  /// Points past the first one whose BER falls below this are not simulated.
  double stop_below_ber = 1e-6;
  LinkOptions link;
};

AwgnReference awgn_reference(const McsConfig& mcs, std::span<const double> snr_grid, const AwgnOptions& options = {});

/// Pool-adjacent-violators fit of a non-increasing sequence, weighted.
std::vector<double> isotonic_nonincreasing(std::span<const double> values, std::span<const double> weights);

struct CalibrationOptions {
  std::uint64_t min_errors = 100;
  std::uint64_t max_bits = 400'000;
  std::uint64_t seed = 1;
  double lambda_min = 0.1;
  double lambda_max = 100.0;
  /// Only samples with simulated BER inside this window enter the fit.
  double ber_low = 1e-5;
  double ber_high = 0.2;
  std::size_t coarse_points = 61;
};

/// One fitted (realization, band, SNR) observation.
struct CalibrationSample {
  std::vector<double> sinr;  // per-tone SINR, linear
  double simulated_ber = 0.0;
};

struct CalibrationResult {
  double lambda = 1.0;
  double objective = 0.0;            // mean squared log10-BER mismatch at lambda
  double objective_unit_lambda = 0.0;  // same at lambda = 1
  std::size_t samples = 0;
  bool underdetermined = false;      // flat ensemble or no usable samples; lambda = 1
  std::vector<CalibrationSample> fitted;
};

/// Mean squared log10-BER mismatch of `samples` against `reference` at `lambda`.
double calibration_objective(std::span<const CalibrationSample> samples, const AwgnReference& reference,
                             double lambda);

/// Fits lambda for `mcs` over every (realization, band, snr) of the ensemble:
/// coarse log-spaced scan of [lambda_min, lambda_max] followed by a
/// golden-section refinement. Needs at least 20 realizations.
CalibrationResult calibrate_lambda(const McsConfig& mcs, std::span<const ChannelRealization> ensemble,
                                   std::span<const double> snr_grid, const AwgnReference& reference,
                                   const CalibrationOptions& options = {});

/// Effective SINR per user and band, in dB.
struct SubbandCsi {
  std::vector<UserId> users;
  std::vector<std::array<double, kNumBands>> eff_db;

  std::size_t num_users() const noexcept { return users.size(); }
  static constexpr std::size_t num_bands() noexcept { return kNumBands; }
  /// Row index of `user`; ArgumentError when absent.
  std::size_t row_of(UserId user) const;
};

/// Entry [u][b] = effective_sinr(subcarrier_sinr(H_u,b), lambda(mcs_u)) in dB.
/// `realizations[i]` belongs to `users[i]`.
SubbandCsi csi_matrix(std::span<const UserProfile> users, std::span<const ChannelRealization> realizations,
                      double esn0_db, const LambdaTable& lambdas);

/// Same, from precomputed per-band data-tone responses.
SubbandCsi csi_matrix(std::span<const UserProfile> users, std::span<const BandResponses> responses, double esn0_db,
                      const LambdaTable& lambdas);

}  // namespace uwbsim

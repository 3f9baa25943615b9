#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "uwbsim/channel_model.hpp"
#include "uwbsim/link_abstraction.hpp"

namespace uwbsim {

/// Plain-text "snr_db ber" lines, one per grid point; '#' starts a comment.
void write_awgn_reference(std::ostream& os, const AwgnReference& ref);
AwgnReference read_awgn_reference(std::istream& is, const std::string& mcs_label);

/// Plain-text "mcs lambda" lines.
void write_lambda_table(std::ostream& os, const LambdaTable& table);
LambdaTable read_lambda_table(std::istream& is);

/// On-disk cache for AWGN references and calibrated lambdas. Entries are keyed
/// by MCS label, seed, SNR grid and the simulation settings, so a change in
/// any of them triggers a recomputation. An empty directory disables caching.
class CalibrationCache {
 public:
  CalibrationCache() = default;
  explicit CalibrationCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const noexcept { return dir_; }

  AwgnReference awgn(const McsConfig& mcs, std::span<const double> grid, const AwgnOptions& options) const;

  /// Calibrates lambda on a fresh ensemble of `ensemble_size` realizations of
  /// `cm` drawn from `options.seed`.
  CalibrationResult lambda(const McsConfig& mcs, ChannelModelId cm, std::size_t ensemble_size,
                           std::span<const double> grid, const AwgnReference& reference,
                           const CalibrationOptions& options) const;

 private:
  std::filesystem::path dir_;
};

/// Hex cache key of an arbitrary settings string.
std::string cache_key(std::string_view settings);

}  // namespace uwbsim

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "uwbsim/calibration_cache.hpp"
#include "uwbsim/link_abstraction.hpp"
#include "uwbsim/phy_link.hpp"
#include "uwbsim/scenario.hpp"

namespace uwbsim {

struct BerCurve {
  std::string label;
  std::vector<BerPoint> points;  // ascending SNR
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  UserId user = 0;  // 0 for the TFC baseline
  QosClass qos = QosClass::Soft;
  std::string mcs;

  bool operator==(const BerCurve&) const = default;
};

/// Per-superframe MAS accounting gathered during a sweep.
struct FairnessStats {
  std::uint64_t superframes = 0;
  /// (shared user, dedicated user with the same MCS) pairs seen in one superframe.
  std::uint64_t pairs_checked = 0;
  /// Pairs where the shared user did not get exactly half the payload.
  std::uint64_t share_violations = 0;
  /// Pairs whose delay ratio was not exactly 2.
  std::uint64_t delay_ratio_violations = 0;
  /// Superframes where the devices disagreed or differed from a direct
  /// negotiate() on the same CSI.
  std::uint64_t allocation_mismatches = 0;
  std::map<UserId, std::uint64_t> shared_superframes;
  std::map<UserId, std::uint64_t> dedicated_superframes;
  std::map<UserId, Rational> delivered_bits;

  FairnessStats& operator+=(const FairnessStats& o);
};

struct SweepResult {
  std::vector<BerCurve> curves;  // users in id order, then the baseline
  FairnessStats fairness;
  std::vector<std::uint64_t> epochs;  // channel epochs simulated per SNR point

  std::size_t censored_points() const noexcept;
  const BerCurve& curve(const std::string& label) const;
};

struct RunOptions {
  unsigned threads = 1;
  /// Epochs evaluated between stopping checks. Part of the result's
  /// definition: changing it changes where a point stops.
  std::size_t batch = 16;
  std::function<void(const std::string&)> log;
};

/// Curve label of a scenario user, e.g. "u1-hard-480".
std::string user_label(const UserProfile& u);

/// Lambda for every MCS in the scenario: overrides first, the rest calibrated
/// (or read back from `cache`) on the scenario's channel model.
LambdaTable resolve_lambdas(const Scenario& s, const CalibrationCache& cache,
                            const std::function<void(const std::string&)>& log = {});

/// SNR sweep: for each point, channel epochs are drawn in batches. Each epoch
/// draws one channel per user, builds the CSI matrix, runs the beacon
/// exchange and simulates every user on its negotiated band (users sharing a
/// band send proportionally fewer frames). A point stops once it has at least
/// `realizations` epochs and every curve has `min_errors` errors or
/// `max_bits` bits; curves short of `min_errors` are flagged censored.
/// Results do not depend on `options.threads`.
SweepResult run_ber_sweep(const Scenario& s, const LambdaTable& lambdas, const RunOptions& options = {});

/// Channel epoch `epoch` of the sweep: one band response set per user, then
/// the baseline's when the scenario has one.
std::vector<BandResponses> epoch_channels(const Scenario& s, std::uint64_t epoch);

/// Allocation the sweep uses for channel epoch `epoch` at `snr_db`.
Assignment epoch_assignment(const Scenario& s, const LambdaTable& lambdas, std::uint64_t epoch, double snr_db);

/// SNR at which the curve crosses `target` BER, by linear interpolation of
/// log10 BER between the bracketing points; NaN when it never crosses. A
/// zero-error point counts as half an error.
double snr_at_ber(const BerCurve& curve, double target);

struct BalanceRow {
  double ratio = 0.0;  // W_MAC / W_PHY
  double gain_db = 0.0;  // mean over hard users of baseline SNR minus user SNR at the target
  std::vector<double> user_gain_db;
};

/// Runs the cross-layer sweep once per ratio (W_PHY = 1, W_MAC = ratio) and
/// compares each hard user against one shared TFC baseline run. Rows are
/// sorted by ratio.
std::vector<BalanceRow> run_balance_sweep(const Scenario& s, std::span<const double> ratios,
                                          const LambdaTable& lambdas, const RunOptions& options = {},
                                          double target_ber = 1e-3);

}  // namespace uwbsim

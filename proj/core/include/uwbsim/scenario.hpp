#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uwbsim/allocator.hpp"
#include "uwbsim/channel_model.hpp"
#include "uwbsim/user.hpp"

namespace uwbsim {

enum class ScenarioMode {
  CrossLayer,   // every user on its negotiated band
  TfcSingleUser,  // one user hopping over all three bands
};

std::string to_string(ScenarioMode m);

struct UserSpec {
  QosClass qos = QosClass::Soft;
  std::string mcs;  // rate label, e.g. "320"
  std::optional<double> weight;
};

struct Scenario {
  std::string name = "scenario";
  ScenarioMode mode = ScenarioMode::CrossLayer;
  ChannelModelId channel_model = ChannelModelId::CM1;
  std::vector<UserSpec> users;
  std::optional<double> k;
  double w_mac = 1.0;
  double w_phy = 1.0;
  AlNormalization normalization = AlNormalization::MinMax;

  double snr_start_db = 0.0;
  double snr_stop_db = 20.0;
  double snr_step_db = 1.0;
  bool noiseless = false;  // smoke-test hook: no noise at any point

  std::uint64_t realizations = 100;  // minimum channel epochs per SNR point
  std::uint64_t min_errors = 100;
  std::uint64_t max_bits = 10'000'000;  // per curve and SNR point
  int frames_per_superframe = 2;        // simulated frames of a dedicated user
  int superframes_per_realization = 1;
  int beacon_mas = 8;
  bool include_shadowing = false;
  std::uint64_t seed = 1;

  bool tfc_baseline = false;  // adds a single-user TFC curve
  std::string baseline_mcs;   // empty: first user's MCS
  std::vector<int> tfc_pattern{1, 2, 3};

  std::map<std::string, double> lambda_overrides;
  std::vector<double> balance_ratios;  // W_MAC / W_PHY values for sweep-balance

  /// Ascending SNR grid; the stop value is included when it lies on the grid.
  std::vector<double> snr_grid() const;
  /// Resolved user profiles (ids 1..n, QoS weights applied).
  std::vector<UserProfile> profiles() const;
  /// Throws ScenarioError listing every violated constraint.
  void validate() const;
  /// Hash of the canonical text form; recorded with emitted results.
  std::uint64_t hash() const;
  /// Canonical key = value text; parse_scenario(to_text()) reproduces it.
  std::string to_text() const;
};

/// Parses the key = value grammar (see scenarios/README.md). Unknown keys,
/// malformed values and constraint violations raise ScenarioError with line
/// numbers.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Built-in experiments: fig5, fig6, fig7, fig8.
Scenario preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace uwbsim

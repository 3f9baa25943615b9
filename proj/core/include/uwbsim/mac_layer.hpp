#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "uwbsim/allocator.hpp"
#include "uwbsim/link_abstraction.hpp"
#include "uwbsim/mcs.hpp"
#include "uwbsim/user.hpp"

namespace uwbsim {

struct TrafficDescriptor {
  bool realtime = false;
  double delay_tolerance_ms = 1000.0;
  double loss_tolerance = 1e-3;
};

/// Delay tolerance below which traffic is treated as hard-QoS even when it
/// is not flagged realtime.
inline constexpr double kHardDelayToleranceMs = 50.0;

QosClass classify_traffic(const TrafficDescriptor& d) noexcept;

/// ceil(n_soft / n_hard) + 1; 2 when either class is empty.
double default_k(std::size_t n_hard, std::size_t n_soft) noexcept;

/// q_soft = 1 / (n_soft + k n_hard), q_hard = k q_soft, in input order.
/// Throws ParameterError for k <= 1 and ArgumentError for an empty list.
std::vector<double> assign_weights(std::span<const QosClass> classes, double k);

/// Fills UserProfile::weight for every user. Without overrides this is
/// assign_weights(); users with weight_override keep their relative values
/// and the whole vector is rescaled to sum to 1.
void resolve_weights(std::span<UserProfile> users, std::optional<double> k = std::nullopt);

inline constexpr int kMasPerSuperframe = 256;
inline constexpr int kMasDurationUs = 256;
inline constexpr int kSuperframeDurationUs = kMasPerSuperframe * kMasDurationUs;
inline constexpr int kDefaultBeaconMas = 8;

/// One superframe: every band runs its own 256-MAS timeline, the first
/// `beacon_mas` slots of which form the beacon period.
struct Superframe {
  int beacon_mas = kDefaultBeaconMas;
  std::array<std::array<std::optional<UserId>, kMasPerSuperframe>, kNumBands> owner{};

  int data_mas() const noexcept { return kMasPerSuperframe - beacon_mas; }
  /// Data MAS owned by `user`, summed over bands.
  int mas_count(UserId user) const noexcept;
};

/// Users alone on a band own all its data MAS; users sharing a band take its
/// data MAS in round-robin order. Throws ParameterError unless
/// 0 <= beacon_mas < 256.
Superframe build_superframe(const Assignment& assignment, int beacon_mas = kDefaultBeaconMas);

/// Payload bits delivered to `user` in one superframe at `mcs`, exact.
Rational delivered_bits(const Superframe& sf, UserId user, const McsConfig& mcs);

/// Ratio of the per-superframe service times of `a` and `b` (the inverse ratio
/// of delivered bits). 2 means `a` waits twice as long as `b` for the same
/// payload.
Rational delay_ratio(const Superframe& sf, UserId a, const McsConfig& mcs_a, UserId b, const McsConfig& mcs_b);

/// "mas_index owner_id band" lines, band-major; beacon or idle slots print
/// '-' as owner.
void write_superframe(std::ostream& os, const Superframe& sf);

/// Allocation information element broadcast in the beacon period.
struct BeaconIe {
  UserId sender = 0;
  double al = 0.0;
  BandSequence sequence{1, 2, 3};
};

struct DeviceState {
  UserProfile profile;
  std::array<double, kNumBands> csi_row{};  // effective SINR per band, dB
};

struct ExchangeOptions {
  AlNormalization normalization = AlNormalization::MinMax;
  /// Senders whose IE nobody receives this superframe.
  std::vector<UserId> lost;
  /// When set, each device receives the IEs in its own random order.
  std::optional<std::uint64_t> shuffle_seed;
};

struct ExchangeResult {
  std::vector<BeaconIe> ies;               // one per device, device order
  std::vector<Assignment> per_device;      // device order
  std::vector<UserId> excluded;            // senders dropped for a lost IE
};

/// Each device computes its IE from its own CSI row (the CSI scale is the
/// superframe-wide reference taken from `csi`), receives the others' IEs,
/// sorts them by sender and runs negotiate() locally.
ExchangeResult beacon_exchange(std::span<const DeviceState> devices, const SubbandCsi& csi, double w_mac,
                               double w_phy, const ExchangeOptions& options = {});

/// Device states for `users` with their rows of `csi`.
std::vector<DeviceState> device_states(std::span<const UserProfile> users, const SubbandCsi& csi);

/// Assignments per superframe; a new one only takes effect at a superframe
/// boundary.
class AllocationTimeline {
 public:
  /// Starts superframe number size() with `a`.
  void begin_superframe(Assignment a) { history_.push_back(std::move(a)); }
  std::size_t size() const noexcept { return history_.size(); }
  const Assignment& superframe(std::size_t i) const { return history_.at(i); }
  /// Assignment in force at `time_us` from the start of the first superframe.
  const Assignment& at(std::uint64_t time_us) const { return history_.at(time_us / kSuperframeDurationUs); }

 private:
  std::vector<Assignment> history_;
};

}  // namespace uwbsim

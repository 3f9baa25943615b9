#include "uwbsim/mac_layer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "uwbsim/errors.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

std::string to_string(QosClass c) { return c == QosClass::Hard ? "hard" : "soft"; }

QosClass parse_qos_class(std::string_view text) {
  if (text == "hard") return QosClass::Hard;
  if (text == "soft") return QosClass::Soft;
  throw ConfigError("unknown QoS class '" + std::string(text) + "' (expected hard or soft)");
}

QosClass classify_traffic(const TrafficDescriptor& d) noexcept {
  return d.realtime || d.delay_tolerance_ms < kHardDelayToleranceMs ? QosClass::Hard : QosClass::Soft;
}

double default_k(std::size_t n_hard, std::size_t n_soft) noexcept {
  if (n_hard == 0 || n_soft == 0) return 2.0;
  return static_cast<double>((n_soft + n_hard - 1) / n_hard + 1);
}

std::vector<double> assign_weights(std::span<const QosClass> classes, double k) {
  if (!(k > 1.0)) throw ParameterError("k must be greater than 1");
  if (classes.empty()) throw ArgumentError("assign_weights needs at least one user");
  const auto n_hard = static_cast<double>(std::count(classes.begin(), classes.end(), QosClass::Hard));
  const auto n_soft = static_cast<double>(classes.size()) - n_hard;
  const double q_soft = 1.0 / (n_soft + k * n_hard);
  const double q_hard = k * q_soft;
  std::vector<double> q;
  q.reserve(classes.size());
  for (auto c : classes) q.push_back(c == QosClass::Hard ? q_hard : q_soft);
  return q;
}

void resolve_weights(std::span<UserProfile> users, std::optional<double> k) {
  std::vector<QosClass> classes;
  for (const auto& u : users) classes.push_back(u.qos);
  const auto n_hard = static_cast<std::size_t>(std::count(classes.begin(), classes.end(), QosClass::Hard));
  const auto q = assign_weights(classes, k.value_or(default_k(n_hard, classes.size() - n_hard)));

  bool any_override = false;
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (users[i].weight_override) {
      if (!(*users[i].weight_override > 0.0)) throw ParameterError("weight overrides must be > 0");
      any_override = true;
      users[i].weight = *users[i].weight_override;
    } else {
      users[i].weight = q[i];
    }
  }
  if (!any_override) return;
  double total = 0.0;
  for (const auto& u : users) total += u.weight;
  for (auto& u : users) u.weight /= total;
}

int Superframe::mas_count(UserId user) const noexcept {
  int n = 0;
  for (const auto& band : owner) {
    n += static_cast<int>(std::count(band.begin(), band.end(), std::optional<UserId>(user)));
  }
  return n;
}

Superframe build_superframe(const Assignment& assignment, int beacon_mas) {
  if (beacon_mas < 0 || beacon_mas >= kMasPerSuperframe) throw ParameterError("beacon period must be 0..255 MAS");
  Superframe sf;
  sf.beacon_mas = beacon_mas;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    const auto& users = assignment.bands[b];
    if (users.empty()) continue;
    for (int m = beacon_mas; m < kMasPerSuperframe; ++m) {
      sf.owner[b][static_cast<std::size_t>(m)] = users[static_cast<std::size_t>(m - beacon_mas) % users.size()];
    }
  }
  return sf;
}

Rational delivered_bits(const Superframe& sf, UserId user, const McsConfig& mcs) {
  return Rational(sf.mas_count(user) * kMasDurationUs, 1) * mcs.data_rate;
}

Rational delay_ratio(const Superframe& sf, UserId a, const McsConfig& mcs_a, UserId b, const McsConfig& mcs_b) {
  const auto bits_a = delivered_bits(sf, a, mcs_a);
  if (bits_a.num == 0) throw ArgumentError("delay_ratio: user " + std::to_string(a) + " has no data MAS");
  return delivered_bits(sf, b, mcs_b) / bits_a;
}

void write_superframe(std::ostream& os, const Superframe& sf) {
  for (std::size_t b = 0; b < kNumBands; ++b) {
    for (std::size_t m = 0; m < kMasPerSuperframe; ++m) {
      os << m << ' ';
      if (sf.owner[b][m]) {
        os << *sf.owner[b][m];
      } else {
        os << '-';
      }
      os << ' ' << b + 1 << '\n';
    }
  }
}

std::vector<DeviceState> device_states(std::span<const UserProfile> users, const SubbandCsi& csi) {
  std::vector<DeviceState> out;
  out.reserve(users.size());
  for (const auto& u : users) out.push_back({u, csi.eff_db.at(csi.row_of(u.id))});
  return out;
}

ExchangeResult beacon_exchange(std::span<const DeviceState> devices, const SubbandCsi& csi, double w_mac,
                               double w_phy, const ExchangeOptions& options) {
  const auto scale = CsiScale::of(csi, options.normalization);
  ExchangeResult result;

  for (const auto& d : devices) {
    result.ies.push_back({d.profile.id, allocation_level(d.profile.weight, d.csi_row, w_mac, w_phy, scale),
                          subband_sequence(d.csi_row)});
  }
  const auto lost = [&](UserId id) {
    return std::find(options.lost.begin(), options.lost.end(), id) != options.lost.end();
  };
  for (const auto& ie : result.ies) {
    if (lost(ie.sender)) result.excluded.push_back(ie.sender);
  }
  std::sort(result.excluded.begin(), result.excluded.end());

  for (std::size_t dev = 0; dev < devices.size(); ++dev) {
    std::vector<BeaconIe> inbox;
    for (const auto& ie : result.ies) {
      if (!lost(ie.sender)) inbox.push_back(ie);
    }
    if (options.shuffle_seed) {
      Rng rng(derive_seed(*options.shuffle_seed, "ie-delivery", {dev}));
      std::shuffle(inbox.begin(), inbox.end(), rng);
    }
    std::sort(inbox.begin(), inbox.end(), [](const BeaconIe& a, const BeaconIe& b) { return a.sender < b.sender; });
    std::vector<AllocationLevel> levels;
    levels.reserve(inbox.size());
    for (const auto& ie : inbox) levels.push_back({ie.sender, ie.al, ie.sequence});
    result.per_device.push_back(negotiate(levels));
  }
  return result;
}

}  // namespace uwbsim

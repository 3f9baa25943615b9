#include "uwbsim/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uwbsim/errors.hpp"
#include "uwbsim/numfmt.hpp"

namespace uwbsim {

std::string to_string(AlNormalization n) { return n == AlNormalization::MinMax ? "minmax" : "raw-db"; }

AlNormalization parse_al_normalization(std::string_view text) {
  if (text == "minmax") return AlNormalization::MinMax;
  if (text == "raw-db") return AlNormalization::RawDb;
  throw ConfigError("unknown AL normalization '" + std::string(text) + "' (expected minmax or raw-db)");
}

CsiScale CsiScale::min_max(const SubbandCsi& csi) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : csi.eff_db) {
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) return {lo, 0.0};
  return {lo, 1.0 / (hi - lo)};
}

CsiScale CsiScale::of(const SubbandCsi& csi, AlNormalization mode) {
  return mode == AlNormalization::MinMax ? min_max(csi) : CsiScale{};
}

BandSequence subband_sequence(const std::array<double, kNumBands>& csi_row) {
  BandSequence seq{1, 2, 3};
  std::stable_sort(seq.begin(), seq.end(), [&](int a, int b) { return csi_row[a - 1] > csi_row[b - 1]; });
  return seq;
}

double allocation_level(double q, const std::array<double, kNumBands>& csi_row, double w_mac, double w_phy,
                        const CsiScale& scale) {
  if (w_mac < 0.0 || w_phy < 0.0) throw ParameterError("W_MAC and W_PHY must be non-negative");
  if (w_mac == 0.0 && w_phy == 0.0) throw ParameterError("W_MAC and W_PHY cannot both be zero");
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("user weight must lie in (0, 1]");
  const double best = *std::max_element(csi_row.begin(), csi_row.end());
  return w_mac * q + w_phy * scale.apply(best);
}

std::vector<AllocationLevel> allocation_levels(std::span<const UserProfile> users, const SubbandCsi& csi,
                                               double w_mac, double w_phy, AlNormalization mode) {
  const auto scale = CsiScale::of(csi, mode);
  std::vector<AllocationLevel> out;
  out.reserve(users.size());
  for (const auto& u : users) {
    const auto& row = csi.eff_db.at(csi.row_of(u.id));
    out.push_back({u.id, allocation_level(u.weight, row, w_mac, w_phy, scale), subband_sequence(row)});
  }
  return out;
}

int Assignment::band_of(UserId user) const noexcept {
  for (std::size_t b = 0; b < bands.size(); ++b) {
    if (std::find(bands[b].begin(), bands[b].end(), user) != bands[b].end()) return static_cast<int>(b) + 1;
  }
  return 0;
}

double Assignment::time_fraction(UserId user) const noexcept {
  const int b = band_of(user);
  return b == 0 ? 0.0 : 1.0 / static_cast<double>(bands[static_cast<std::size_t>(b - 1)].size());
}

bool Assignment::shared(UserId user) const noexcept {
  const int b = band_of(user);
  return b != 0 && bands[static_cast<std::size_t>(b - 1)].size() > 1;
}

std::size_t Assignment::num_users() const noexcept {
  std::size_t n = 0;
  for (const auto& b : bands) n += b.size();
  return n;
}

std::vector<AllocationLevel> rank_levels(std::span<const AllocationLevel> levels) {
  std::vector<AllocationLevel> ranked(levels.begin(), levels.end());
  std::sort(ranked.begin(), ranked.end(), [](const AllocationLevel& a, const AllocationLevel& b) {
    if (a.al != b.al) return a.al > b.al;
    return a.user < b.user;
  });
  return ranked;
}

Assignment negotiate(std::span<const AllocationLevel> levels) {
  const auto ranked = rank_levels(levels);
  Assignment out;
  std::array<double, kNumBands> total{};
  std::array<std::size_t, kNumBands> lowest_rank{};

  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto& u = ranked[r];
    std::size_t band = 0;
    if (r < kNumBands) {
      const auto it = std::find_if(u.sequence.begin(), u.sequence.end(),
                                   [&](int b) { return out.bands[static_cast<std::size_t>(b - 1)].empty(); });
      band = static_cast<std::size_t>(*it - 1);
    } else {
      for (std::size_t b = 1; b < kNumBands; ++b) {
        if (total[b] < total[band] || (total[b] == total[band] && lowest_rank[b] > lowest_rank[band])) band = b;
      }
    }
    out.bands[band].push_back(u.user);
    total[band] += u.al;
    lowest_rank[band] = r;
  }
  return out;
}

std::string format_assignment(const Assignment& a) {
  std::ostringstream os;
  for (std::size_t b = 0; b < a.bands.size(); ++b) {
    os << b + 1 << ':';
    const double fraction = a.bands[b].empty() ? 0.0 : 1.0 / static_cast<double>(a.bands[b].size());
    for (std::size_t i = 0; i < a.bands[b].size(); ++i) {
      os << (i == 0 ? " " : ",") << a.bands[b][i] << '@' << format_double(fraction);
    }
    os << '\n';
  }
  return os.str();
}

Assignment parse_assignment(std::string_view text) {
  Assignment a;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    const auto band = colon == std::string::npos ? std::nullopt : parse_integer<int>(line.substr(0, colon));
    if (!band || *band < 1 || *band > kNumBands) throw ConfigError("assignment: bad band in '" + line + "'");
    auto& users = a.bands[static_cast<std::size_t>(*band - 1)];
    std::istringstream entries(line.substr(colon + 1));
    for (std::string entry; std::getline(entries, entry, ',');) {
      entry.erase(0, entry.find_first_not_of(' '));
      if (entry.empty()) continue;
      const auto at = entry.find('@');
      const auto id = parse_integer<UserId>(entry.substr(0, at));
      if (!id) throw ConfigError("assignment: bad user entry '" + entry + "'");
      users.push_back(*id);
    }
  }
  return a;
}

}  // namespace uwbsim

#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uwbsim/link_abstraction.hpp"
#include "uwbsim/ofdm.hpp"
#include "uwbsim/user.hpp"

namespace uwbsim {

/// Bands 1..3 ordered from most to least preferred.
using BandSequence = std::array<int, kNumBands>;

/// How the effective-SINR term enters the allocation level.
enum class AlNormalization {
  MinMax,  // whole CSI matrix (dB) mapped affinely onto [0, 1]
  RawDb,   // effective SINR in dB, unscaled
};

std::string to_string(AlNormalization n);
AlNormalization parse_al_normalization(std::string_view text);

/// Affine map applied to every CSI entry before it enters the AL.
struct CsiScale {
  double offset = 0.0;
  double scale = 1.0;
  double apply(double db) const noexcept { return (db - offset) * scale; }

  /// Min-max bounds of the matrix; a constant matrix maps to 0.
  static CsiScale min_max(const SubbandCsi& csi);
  static CsiScale of(const SubbandCsi& csi, AlNormalization mode);
};

struct AllocationLevel {
  UserId user = 0;
  double al = 0.0;
  BandSequence sequence{1, 2, 3};
};

/// Bands sorted by effective SINR, descending; ties go to the lower band.
BandSequence subband_sequence(const std::array<double, kNumBands>& csi_row);

/// AL = w_mac * q + w_phy * max_b scale(csi_row[b]). Throws ParameterError for
/// negative weights, both weights zero, or q outside (0, 1].
double allocation_level(double q, const std::array<double, kNumBands>& csi_row, double w_mac, double w_phy,
                        const CsiScale& scale = {});

/// One AllocationLevel per user, in input order, with the scale taken from
/// the whole matrix.
std::vector<AllocationLevel> allocation_levels(std::span<const UserProfile> users, const SubbandCsi& csi,
                                               double w_mac, double w_phy,
                                               AlNormalization mode = AlNormalization::MinMax);

/// Per-superframe band occupancy. Users on one band share its time equally,
/// in the listed order.
struct Assignment {
  std::array<std::vector<UserId>, kNumBands> bands;

  /// Band (1..3) of `user`, or 0 if absent.
  int band_of(UserId user) const noexcept;
  double time_fraction(UserId user) const noexcept;
  bool shared(UserId user) const noexcept;
  std::size_t num_users() const noexcept;

  bool operator==(const Assignment&) const = default;
};

/// Ranks users by AL (descending, ties to the lower id). The first three each
/// take their most preferred band still free; every later user joins the band
/// whose occupants have the lowest total AL, ties going to the band holding
/// the lowest-ranked user.
Assignment negotiate(std::span<const AllocationLevel> levels);

/// Users in AL rank order, as used by negotiate().
std::vector<AllocationLevel> rank_levels(std::span<const AllocationLevel> levels);

/// "band: user@fraction,..." lines, one per band (empty bands print nothing
/// after the colon).
std::string format_assignment(const Assignment& a);
Assignment parse_assignment(std::string_view text);

}  // namespace uwbsim

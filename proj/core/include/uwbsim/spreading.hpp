#pragma once

#include <complex>
#include <span>
#include <vector>

#include "uwbsim/modulation.hpp"
#include "uwbsim/ofdm.hpp"

namespace uwbsim {

/// Transmitted OFDM symbols, 100 data tones each, stored symbol-major.
struct OfdmGrid {
  std::vector<Cplx> tones;
  /// Sub-band (1..3) per OFDM symbol, or 0 when not yet assigned by a band plan.
  std::vector<int> band;

  std::size_t num_symbols() const noexcept { return tones.size() / kNumDataTones; }
  std::span<const Cplx> symbol(std::size_t i) const {
    return std::span<const Cplx>(tones).subspan(i * kNumDataTones, kNumDataTones);
  }
  std::span<Cplx> symbol(std::size_t i) { return std::span<Cplx>(tones).subspan(i * kNumDataTones, kNumDataTones); }
};

/// Payload symbols carried by one OFDM symbol: 50 with FDS, otherwise 100.
constexpr std::size_t payload_per_symbol(bool fds) noexcept { return fds ? kNumDataTones / 2 : kNumDataTones; }

/// FDS copies payload symbol i of an OFDM symbol onto tones i and i+50; TDS
/// repeats every OFDM symbol in the following slot. Throws ArgumentError when
/// `symbols` does not fill a whole number of OFDM symbols.
OfdmGrid spread(std::span<const Cplx> symbols, bool fds, bool tds);

/// Maximum-ratio combines every copy of each payload symbol. `received` and
/// `channel` are laid out like OfdmGrid::tones (per-slot channel gains).
std::vector<CombinedTone> despread(std::span<const Cplx> received, std::span<const Cplx> channel, bool fds, bool tds);

}  // namespace uwbsim

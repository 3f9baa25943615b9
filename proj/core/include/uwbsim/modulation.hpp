#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "uwbsim/mcs.hpp"

namespace uwbsim {

using Cplx = std::complex<double>;

/// Coded bits per DCM mapping block: one OFDM symbol, 50 tone pairs x 4 bits.
inline constexpr std::size_t kDcmBlockBits = 200;
/// Tone distance between the two carriers of a DCM pair.
inline constexpr std::size_t kDcmToneSeparation = 50;

/// Gray QPSK: I = (2 b0 - 1)/sqrt2, Q = (2 b1 - 1)/sqrt2, so 00 -> (-1-j)/sqrt2.
/// DCM: each 4-bit group k of a 200-bit block drives tones k and k+50 through
/// [y_k; y_k+50] = [2 1; 1 -2] [x_a; x_b] / sqrt10, x_a = (2b0-1) + j(2b1-1),
/// x_b = (2b2-1) + j(2b3-1). Both alphabets have unit average energy.
/// Throws ArgumentError when the bit count does not fill whole symbols/blocks.
std::vector<Cplx> map_symbols(std::span<const std::uint8_t> coded_bits, Modulation modulation);

/// Matched-filter statistics of one payload tone after maximum-ratio combining
/// of all its copies: z = sum conj(h) y, gain = sum |h|^2.
struct CombinedTone {
  Cplx z;
  double gain = 0.0;
};

/// Bit LLRs (positive favours 0) multiplied by the per-tone noise variance,
/// so the result does not depend on N0 and stays finite without noise. DCM
/// uses the max-log approximation over each real dimension.
std::vector<float> demap_llrs(std::span<const CombinedTone> tones, Modulation modulation);

}  // namespace uwbsim

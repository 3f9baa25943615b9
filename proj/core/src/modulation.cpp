#include "uwbsim/modulation.hpp"

#include <algorithm>
#include <cmath>

#include "uwbsim/errors.hpp"

namespace uwbsim {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt10 = 1.0 / std::sqrt(10.0);

double pam(std::uint8_t b) { return b ? 1.0 : -1.0; }

// One real dimension of a DCM pair: bits (a, b) -> (s_first, s_second).
struct DcmPoint {
  double first;
  double second;
};

DcmPoint dcm_real(double xa, double xb) { return {(2.0 * xa + xb) * kInvSqrt10, (xa - 2.0 * xb) * kInvSqrt10}; }

// Max-log LLRs (times N0) for the two bits of one real DCM dimension. The
// four hypotheses (a, b) map to first/second amplitudes (in units of
// 1/sqrt10): 00 -> (-3, 1), 01 -> (-1, -3), 10 -> (1, 3), 11 -> (3, -1).
void dcm_dimension_llr(double z1, double g1, double z2, double g2, float& llr_a, float& llr_b) {
  const double u1 = -2.0 * kInvSqrt10 * z1;
  const double u2 = -2.0 * kInvSqrt10 * z2;
  const double e1 = 0.1 * g1;
  const double e2 = 0.1 * g2;
  const double d00 = -3.0 * u1 + 9.0 * e1 + u2 + e2;
  const double d01 = -u1 + e1 - 3.0 * u2 + 9.0 * e2;
  const double d10 = u1 + e1 + 3.0 * u2 + 9.0 * e2;
  const double d11 = 3.0 * u1 + 9.0 * e1 - u2 + e2;
  llr_a = static_cast<float>(std::min(d10, d11) - std::min(d00, d01));
  llr_b = static_cast<float>(std::min(d01, d11) - std::min(d00, d10));
}

}  // namespace

std::vector<Cplx> map_symbols(std::span<const std::uint8_t> coded_bits, Modulation modulation) {
  std::vector<Cplx> out;
  if (modulation == Modulation::QPSK) {
    if (coded_bits.size() % 2 != 0) throw ArgumentError("QPSK needs an even number of bits");
    out.reserve(coded_bits.size() / 2);
    for (std::size_t i = 0; i < coded_bits.size(); i += 2) {
      out.emplace_back(pam(coded_bits[i]) * kInvSqrt2, pam(coded_bits[i + 1]) * kInvSqrt2);
    }
    return out;
  }

  if (coded_bits.size() % kDcmBlockBits != 0) {
    throw ArgumentError("DCM needs a multiple of 200 bits (one OFDM symbol)");
  }
  out.resize(coded_bits.size() / 2);
  const std::size_t pairs = kDcmBlockBits / 4;
  for (std::size_t block = 0; block < coded_bits.size() / kDcmBlockBits; ++block) {
    const auto* b = coded_bits.data() + block * kDcmBlockBits;
    Cplx* y = out.data() + block * (kDcmBlockBits / 2);
    for (std::size_t k = 0; k < pairs; ++k) {
      const auto re = dcm_real(pam(b[4 * k]), pam(b[4 * k + 2]));
      const auto im = dcm_real(pam(b[4 * k + 1]), pam(b[4 * k + 3]));
      y[k] = {re.first, im.first};
      y[k + kDcmToneSeparation] = {re.second, im.second};
    }
  }
  return out;
}

std::vector<float> demap_llrs(std::span<const CombinedTone> tones, Modulation modulation) {
  std::vector<float> llr(tones.size() * 2);
  if (modulation == Modulation::QPSK) {
    // LLR(b) = -4 a Re(z) / N0 with a = 1/sqrt2.
    const double c = -4.0 * kInvSqrt2;
    for (std::size_t i = 0; i < tones.size(); ++i) {
      llr[2 * i] = static_cast<float>(c * tones[i].z.real());
      llr[2 * i + 1] = static_cast<float>(c * tones[i].z.imag());
    }
    return llr;
  }

  const std::size_t block_tones = kDcmBlockBits / 2;
  if (tones.size() % block_tones != 0) throw ArgumentError("DCM demapping needs whole 100-tone symbols");
  for (std::size_t block = 0; block < tones.size() / block_tones; ++block) {
    const CombinedTone* t = tones.data() + block * block_tones;
    float* out = llr.data() + block * kDcmBlockBits;
    for (std::size_t k = 0; k < kDcmBlockBits / 4; ++k) {
      const auto& p = t[k];
      const auto& q = t[k + kDcmToneSeparation];
      dcm_dimension_llr(p.z.real(), p.gain, q.z.real(), q.gain, out[4 * k], out[4 * k + 2]);
      dcm_dimension_llr(p.z.imag(), p.gain, q.z.imag(), q.gain, out[4 * k + 1], out[4 * k + 3]);
    }
  }
  return llr;
}

}  // namespace uwbsim

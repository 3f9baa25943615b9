#include "uwbsim/spreading.hpp"

#include <complex>

#include "uwbsim/errors.hpp"

namespace uwbsim {

OfdmGrid spread(std::span<const Cplx> symbols, bool fds, bool tds) {
  const std::size_t per = payload_per_symbol(fds);
  if (symbols.size() % per != 0) {
    throw ArgumentError("spread: symbol count is not a whole number of OFDM symbols");
  }
  const std::size_t payload_syms = symbols.size() / per;
  const std::size_t repeat = tds ? 2 : 1;

  OfdmGrid grid;
  grid.tones.resize(payload_syms * repeat * kNumDataTones);
  grid.band.assign(payload_syms * repeat, 0);
  for (std::size_t p = 0; p < payload_syms; ++p) {
    const auto src = symbols.subspan(p * per, per);
    for (std::size_t r = 0; r < repeat; ++r) {
      auto dst = grid.symbol(p * repeat + r);
      for (std::size_t i = 0; i < per; ++i) {
        dst[i] = src[i];
        if (fds) dst[i + per] = src[i];
      }
    }
  }
  return grid;
}

std::vector<CombinedTone> despread(std::span<const Cplx> received, std::span<const Cplx> channel, bool fds,
                                   bool tds) {
  if (received.size() != channel.size() || received.size() % kNumDataTones != 0) {
    throw ArgumentError("despread: received/channel size mismatch");
  }
  const std::size_t per = payload_per_symbol(fds);
  const std::size_t repeat = tds ? 2 : 1;
  const std::size_t slots = received.size() / kNumDataTones;
  if (slots % repeat != 0) throw ArgumentError("despread: odd slot count with TDS");

  std::vector<CombinedTone> out((slots / repeat) * per);
  for (std::size_t s = 0; s < slots; ++s) {
    const std::size_t p = s / repeat;
    const Cplx* y = received.data() + s * kNumDataTones;
    const Cplx* h = channel.data() + s * kNumDataTones;
    CombinedTone* dst = out.data() + p * per;
    for (std::size_t k = 0; k < kNumDataTones; ++k) {
      auto& c = dst[k % per];
      c.z += std::conj(h[k]) * y[k];
      c.gain += std::norm(h[k]);
    }
  }
  return out;
}

}  // namespace uwbsim

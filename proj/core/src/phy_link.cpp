#include "uwbsim/phy_link.hpp"

#include <algorithm>
#include <cmath>

#include "uwbsim/errors.hpp"
#include "uwbsim/spreading.hpp"

namespace uwbsim {

namespace {

constexpr std::size_t kInterleaverColumns = 10;

}  // namespace

BandPlan::BandPlan(std::vector<int> pattern) : pattern_(std::move(pattern)) {
  if (pattern_.empty()) throw ArgumentError("band plan needs at least one band");
  for (int b : pattern_) {
    if (b < 1 || b > kNumBands) throw ArgumentError("band plan entry outside 1..3");
  }
}

BandPlan BandPlan::fixed(int band) { return BandPlan({band}); }
BandPlan BandPlan::tfc(std::vector<int> pattern) { return BandPlan(std::move(pattern)); }

BandResponses band_responses(const ChannelRealization& r) {
  BandResponses out;
  for (int b = 1; b <= kNumBands; ++b) out[static_cast<std::size_t>(b - 1)] = frequency_response(r, b, kNumDataTones);
  return out;
}

BandResponses flat_responses() {
  BandResponses out;
  for (auto& v : out) v.assign(kNumDataTones, Cplx(1.0, 0.0));
  return out;
}

std::vector<std::uint8_t> interleave(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  if (n % kInterleaverColumns != 0) throw ArgumentError("interleaver block must be a multiple of 10 bits");
  const std::size_t rows = n / kInterleaverColumns;
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[(i % kInterleaverColumns) * rows + i / kInterleaverColumns] = bits[i];
  return out;
}

std::vector<float> deinterleave(std::span<const float> llrs) {
  const std::size_t n = llrs.size();
  if (n % kInterleaverColumns != 0) throw ArgumentError("interleaver block must be a multiple of 10 bits");
  const std::size_t rows = n / kInterleaverColumns;
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = llrs[(i % kInterleaverColumns) * rows + i / kInterleaverColumns];
  return out;
}

LinkSimulator::LinkSimulator(const McsConfig& mcs, BandResponses channel, BandPlan plan, LinkOptions options)
    : mcs_(mcs), channel_(std::move(channel)), plan_(std::move(plan)), options_(options), code_(mcs.code_rate) {
  for (const auto& h : channel_) {
    if (h.size() != kNumDataTones) throw ArgumentError("band response must cover the 100 data tones");
  }
  payload_symbols_ = kSlotsPerFrame / (mcs_.tds ? 2 : 1);
  coded_capacity_ = payload_symbols_ * static_cast<std::size_t>(mcs_.coded_bits_per_symbol());
  info_bits_ = options_.uncoded ? coded_capacity_ : code_.max_info_bits(coded_capacity_);
}

LinkCounts LinkSimulator::run_frames(std::size_t frames, double esn0_db, Rng& rng) {
  const double noise_std = std::isinf(esn0_db) && esn0_db > 0 ? 0.0 : std::sqrt(0.5 * std::pow(10.0, -esn0_db / 10.0));
  LinkCounts total;
  for (std::size_t f = 0; f < frames; ++f) total += run_one(noise_std, rng);
  return total;
}

LinkCounts LinkSimulator::run_one(double noise_std, Rng& rng) {
  std::vector<std::uint8_t> info(info_bits_);
  for (std::size_t i = 0; i < info_bits_; i += 64) {
    std::uint64_t word = rng();
    for (std::size_t j = i; j < std::min(info_bits_, i + 64); ++j, word >>= 1) info[j] = word & 1U;
  }

  std::vector<std::uint8_t> coded = options_.uncoded ? info : code_.encode(info);
  const std::size_t coded_len = coded.size();
  coded.resize(coded_capacity_, 0);  // pad bits fill the last OFDM symbol

  const std::size_t per_symbol = static_cast<std::size_t>(mcs_.coded_bits_per_symbol());
  std::vector<std::uint8_t> interleaved;
  interleaved.reserve(coded_capacity_);
  for (std::size_t p = 0; p < payload_symbols_; ++p) {
    const auto block = interleave(std::span<const std::uint8_t>(coded).subspan(p * per_symbol, per_symbol));
    interleaved.insert(interleaved.end(), block.begin(), block.end());
  }

  const auto symbols = map_symbols(interleaved, mcs_.modulation);
  const OfdmGrid grid = spread(symbols, mcs_.fds, mcs_.tds);

  std::vector<Cplx> rx(grid.tones.size());
  std::vector<Cplx> gains(grid.tones.size());
  for (std::size_t s = 0; s < grid.num_symbols(); ++s) {
    const auto& h = channel_[static_cast<std::size_t>(plan_.band_for_slot(s) - 1)];
    const auto x = grid.symbol(s);
    for (std::size_t k = 0; k < kNumDataTones; ++k) {
      Cplx y = h[k] * x[k];
      if (noise_std > 0.0) {
        const double re = gauss_(rng);
        const double im = gauss_(rng);
        y += Cplx(noise_std * re, noise_std * im);
      }
      rx[s * kNumDataTones + k] = y;
      gains[s * kNumDataTones + k] = h[k];
    }
  }

  const auto combined = despread(rx, gains, mcs_.fds, mcs_.tds);
  const auto llr_interleaved = demap_llrs(combined, mcs_.modulation);

  std::vector<float> llr;
  llr.reserve(coded_capacity_);
  for (std::size_t p = 0; p < payload_symbols_; ++p) {
    const auto block = deinterleave(std::span<const float>(llr_interleaved).subspan(p * per_symbol, per_symbol));
    llr.insert(llr.end(), block.begin(), block.end());
  }
  llr.resize(coded_len);

  LinkCounts counts;
  counts.bits = info_bits_;
  if (options_.uncoded) {
    for (std::size_t i = 0; i < info_bits_; ++i) {
      const std::uint8_t hard = llr[i] < 0.0F ? 1 : 0;
      counts.bit_errors += hard != info[i];
    }
    return counts;
  }
  const auto decoded = decoder_.decode(code_, llr, info_bits_);
  for (std::size_t i = 0; i < info_bits_; ++i) counts.bit_errors += decoded[i] != info[i];
  return counts;
}

BerPoint simulate_link(const McsConfig& mcs, const BandResponses& channel, const BandPlan& plan, double esn0_db,
                       std::uint64_t min_errors, std::uint64_t max_bits, std::uint64_t seed, LinkOptions options) {
  LinkSimulator sim(mcs, channel, plan, options);
  Rng rng(seed);
  BerPoint point;
  point.snr_db = esn0_db;
  LinkCounts total;
  do {
    total += sim.run_frames(1, esn0_db, rng);
  } while (total.bit_errors < min_errors && total.bits < max_bits);
  point.bit_errors = total.bit_errors;
  point.bits_tested = total.bits;
  point.censored = total.bit_errors < min_errors;
  return point;
}

BerPoint simulate_link(const McsConfig& mcs, const ChannelRealization& realization, const BandPlan& plan,
                       double esn0_db, std::uint64_t min_errors, std::uint64_t max_bits, std::uint64_t seed,
                       LinkOptions options) {
  return simulate_link(mcs, band_responses(realization), plan, esn0_db, min_errors, max_bits, seed, options);
}

}  // namespace uwbsim

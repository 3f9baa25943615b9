#include "uwbsim/link_abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uwbsim/errors.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

namespace {

// Floor for dB conversion of a zero effective SINR (all tones faded out).
constexpr double kMinLinear = 1e-12;

double log10_ber(double ber) { return std::log10(std::max(ber, AwgnReference::kBerFloor)); }

bool is_flat(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= 1e-9 * std::max(1.0, std::abs(*hi));
}

}  // namespace

double to_db(double linear) noexcept { return 10.0 * std::log10(linear); }
double from_db(double db) noexcept { return std::pow(10.0, db / 10.0); }

SinrVector subcarrier_sinr(std::span<const Cplx> h, double esn0_db) {
  const double snr = from_db(esn0_db);
  SinrVector out;
  out.values.reserve(h.size());
  for (const auto& g : h) out.values.push_back(std::norm(g) * snr);
  return out;
}

double effective_sinr(std::span<const double> sinr, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("effective SINR scaling factor must be > 0");
  if (sinr.empty()) throw ArgumentError("effective SINR of an empty vector");

  // Sorted summation makes the result independent of the input order.
  std::vector<double> s(sinr.begin(), sinr.end());
  std::sort(s.begin(), s.end());
  const double lo = s.front();
  double acc = 0.0;
  for (double v : s) acc += std::exp(-(v - lo) / lambda);
  return lo - lambda * std::log(acc / static_cast<double>(s.size()));
}

void LambdaTable::set(const std::string& mcs_label, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("lambda for MCS " + mcs_label + " must be > 0");
  values_[mcs_label] = lambda;
}

double LambdaTable::at(const McsConfig& mcs) const {
  const auto it = values_.find(mcs.label);
  if (it == values_.end()) throw ConfigError("no lambda calibrated for MCS " + mcs.label);
  return it->second;
}

double AwgnReference::ber_at(double snr_db) const {
  if (points.empty()) throw ArgumentError("empty AWGN reference");
  if (snr_db <= points.front().snr_db) return std::max(ber.front(), kBerFloor);
  if (snr_db >= points.back().snr_db) return std::max(ber.back(), kBerFloor);
  const auto it = std::upper_bound(points.begin(), points.end(), snr_db,
                                   [](double s, const BerPoint& p) { return s < p.snr_db; });
  const auto i = static_cast<std::size_t>(it - points.begin());
  const double x0 = points[i - 1].snr_db;
  const double x1 = points[i].snr_db;
  const double y0 = log10_ber(ber[i - 1]);
  const double y1 = log10_ber(ber[i]);
  const double t = (snr_db - x0) / (x1 - x0);
  return std::pow(10.0, y0 + t * (y1 - y0));
}

std::vector<double> isotonic_nonincreasing(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw ArgumentError("isotonic fit: size mismatch");
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], std::max(weights[i], 1e-300), 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double w = a.weight + b.weight;
      a.mean = (a.mean * a.weight + b.mean * b.weight) / w;
      a.weight = w;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

AwgnReference awgn_reference(const McsConfig& mcs, std::span<const double> snr_grid, const AwgnOptions& options) {
  if (snr_grid.empty()) throw ArgumentError("AWGN reference needs a nonempty SNR grid");
  if (!std::is_sorted(snr_grid.begin(), snr_grid.end())) throw ArgumentError("SNR grid must be ascending");

  AwgnReference ref;
  ref.mcs_label = mcs.label;
  const auto flat = flat_responses();
  for (std::size_t i = 0; i < snr_grid.size(); ++i) {
    const auto seed = derive_seed(options.seed, "awgn", {static_cast<std::uint64_t>(i)});
    ref.points.push_back(simulate_link(mcs, flat, BandPlan::fixed(1), snr_grid[i], options.min_errors,
                                       options.max_bits, seed, options.link));
    if (ref.points.back().ber() < options.stop_below_ber) break;
  }

  std::vector<double> raw, weight;
  for (const auto& p : ref.points) {
    raw.push_back(p.ber());
    weight.push_back(static_cast<double>(p.bits_tested));
  }
  ref.ber = isotonic_nonincreasing(raw, weight);
  return ref;
}

double calibration_objective(std::span<const CalibrationSample> samples, const AwgnReference& reference,
                             double lambda) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) {
    const double eff_db = to_db(std::max(effective_sinr(s.sinr, lambda), kMinLinear));
    const double d = log10_ber(s.simulated_ber) - log10_ber(reference.ber_at(eff_db));
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

CalibrationResult calibrate_lambda(const McsConfig& mcs, std::span<const ChannelRealization> ensemble,
                                   std::span<const double> snr_grid, const AwgnReference& reference,
                                   const CalibrationOptions& options) {
  if (ensemble.size() < 20) throw ArgumentError("lambda calibration needs at least 20 realizations");
  if (snr_grid.empty()) throw ArgumentError("lambda calibration needs a nonempty SNR grid");
  if (!(options.lambda_min > 0.0) || !(options.lambda_max > options.lambda_min)) {
    throw ParameterError("invalid lambda search interval");
  }

  CalibrationResult result;
  std::vector<BandResponses> responses;
  responses.reserve(ensemble.size());
  bool all_flat = true;
  for (const auto& r : ensemble) {
    responses.push_back(band_responses(r));
    for (const auto& h : responses.back()) {
      if (!is_flat(subcarrier_sinr(h, 0.0).values)) all_flat = false;
    }
  }
  if (all_flat) {
    // SINR_eff equals the common per-tone SINR for every lambda.
    result.underdetermined = true;
    return result;
  }

  for (std::size_t i = 0; i < responses.size(); ++i) {
    for (int b = 1; b <= kNumBands; ++b) {
      const auto& h = responses[i][static_cast<std::size_t>(b - 1)];
      for (std::size_t k = 0; k < snr_grid.size(); ++k) {
        const auto seed = derive_seed(options.seed, "calibrate",
                                      {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(b),
                                       static_cast<std::uint64_t>(k)});
        const auto point = simulate_link(mcs, responses[i], BandPlan::fixed(b), snr_grid[k], options.min_errors,
                                         options.max_bits, seed);
        const double ber = point.ber();
        // BER only falls with SNR, so the rest of this row is below the window.
        if (ber < options.ber_low) break;
        if (ber > options.ber_high) continue;
        result.fitted.push_back({subcarrier_sinr(h, snr_grid[k]).values, ber});
      }
    }
  }
  result.samples = result.fitted.size();
  if (result.fitted.empty()) {
    result.underdetermined = true;
    return result;
  }

  const auto objective = [&](double log_lambda) {
    return calibration_objective(result.fitted, reference, std::exp(log_lambda));
  };

  const double a = std::log(options.lambda_min);
  const double b = std::log(options.lambda_max);
  const std::size_t n = std::max<std::size_t>(options.coarse_points, 3);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = objective(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  // Golden-section search inside the bracket around the best coarse point.
  const double step = (b - a) / static_cast<double>(n - 1);
  double lo = a + step * static_cast<double>(best == 0 ? 0 : best - 1);
  double hi = a + step * static_cast<double>(std::min(best + 1, n - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  double log_lambda = f1 <= f2 ? x1 : x2;
  double value = std::min(f1, f2);
  if (best_value < value) {
    log_lambda = a + step * static_cast<double>(best);
    value = best_value;
  }

  result.lambda = std::exp(log_lambda);
  result.objective = value;
  result.objective_unit_lambda = calibration_objective(result.fitted, reference, 1.0);
  return result;
}

std::size_t SubbandCsi::row_of(UserId user) const {
  const auto it = std::find(users.begin(), users.end(), user);
  if (it == users.end()) throw ArgumentError("user " + std::to_string(user) + " not in CSI matrix");
  return static_cast<std::size_t>(it - users.begin());
}

SubbandCsi csi_matrix(std::span<const UserProfile> users, std::span<const BandResponses> responses, double esn0_db,
                      const LambdaTable& lambdas) {
  if (users.size() != responses.size()) throw ArgumentError("csi_matrix: one channel per user required");
  SubbandCsi csi;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const double lambda = lambdas.at(users[u].mcs);
    std::array<double, kNumBands> row{};
    for (std::size_t b = 0; b < kNumBands; ++b) {
      const auto& h = responses[u][b];
      if (h.size() != kNumDataTones) throw ArgumentError("csi_matrix: band response must have 100 tones");
      const double eff = effective_sinr(subcarrier_sinr(h, esn0_db), lambda);
      row[b] = to_db(std::max(eff, kMinLinear));
    }
    csi.users.push_back(users[u].id);
    csi.eff_db.push_back(row);
  }
  return csi;
}

SubbandCsi csi_matrix(std::span<const UserProfile> users, std::span<const ChannelRealization> realizations,
                      double esn0_db, const LambdaTable& lambdas) {
  if (users.size() != realizations.size()) throw ArgumentError("csi_matrix: one realization per user required");
  std::vector<BandResponses> responses;
  responses.reserve(realizations.size());
  for (const auto& r : realizations) responses.push_back(band_responses(r));
  return csi_matrix(users, responses, esn0_db, lambdas);
}

}  // namespace uwbsim

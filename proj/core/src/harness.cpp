#include "uwbsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "uwbsim/allocator.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/mac_layer.hpp"
#include "uwbsim/numfmt.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

namespace {

constexpr std::uint64_t kCalibrationSeed = 1;
constexpr std::size_t kCalibrationEnsemble = 20;

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const auto workers = std::min<std::size_t>(std::max(threads, 1U), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<double> awgn_grid() {
  std::vector<double> g;
  for (int i = -4; i <= 48; ++i) g.push_back(0.5 * i);
  return g;
}

std::vector<double> calibration_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 24; ++i) g.push_back(i);
  return g;
}

const McsConfig& baseline_mcs(const Scenario& s) {
  return mcs_by_label(s.baseline_mcs.empty() ? s.users.front().mcs : s.baseline_mcs);
}

struct Epoch {
  std::vector<BandResponses> channels;  // users, then the baseline
};

// Channel u of epoch e is seeded by (e, u) alone; users a mode does not
// simulate are left empty.
Epoch draw_epoch(const Scenario& s, std::size_t num_channels, std::size_t first, std::uint64_t e) {
  const auto params = ChannelModelParams::preset(s.channel_model);
  Epoch ep;
  ep.channels.resize(first);
  for (std::size_t u = first; u < num_channels; ++u) {
    auto r = generate_realization(params, derive_seed(s.seed, "channel", {e, u}));
    if (!s.include_shadowing) r = without_shadowing(std::move(r));
    ep.channels.push_back(band_responses(r));
  }
  return ep;
}

struct ItemResult {
  std::vector<LinkCounts> counts;  // per curve
  FairnessStats fairness;
};

void account_superframe(const Superframe& sf, std::span<const UserProfile> users, const Assignment& a,
                        FairnessStats& f) {
  ++f.superframes;
  for (const auto& u : users) {
    if (a.shared(u.id)) {
      ++f.shared_superframes[u.id];
    } else {
      ++f.dedicated_superframes[u.id];
    }
    f.delivered_bits[u.id] = f.delivered_bits[u.id] + delivered_bits(sf, u.id, u.mcs);
  }
  for (const auto& s : users) {
    if (!a.shared(s.id)) continue;
    for (const auto& d : users) {
      if (a.shared(d.id) || !(d.mcs.data_rate == s.mcs.data_rate)) continue;
      ++f.pairs_checked;
      if (!(delivered_bits(sf, s.id, s.mcs) * Rational(2, 1) == delivered_bits(sf, d.id, d.mcs))) {
        ++f.share_violations;
      }
      if (!(delay_ratio(sf, d.id, d.mcs, s.id, s.mcs) == Rational(1, 2)) ||
          !(delay_ratio(sf, s.id, s.mcs, d.id, d.mcs) == Rational(2, 1))) {
        ++f.delay_ratio_violations;
      }
    }
  }
}

}  // namespace

FairnessStats& FairnessStats::operator+=(const FairnessStats& o) {
  superframes += o.superframes;
  pairs_checked += o.pairs_checked;
  share_violations += o.share_violations;
  delay_ratio_violations += o.delay_ratio_violations;
  allocation_mismatches += o.allocation_mismatches;
  for (const auto& [k, v] : o.shared_superframes) shared_superframes[k] += v;
  for (const auto& [k, v] : o.dedicated_superframes) dedicated_superframes[k] += v;
  for (const auto& [k, v] : o.delivered_bits) delivered_bits[k] = delivered_bits[k] + v;
  return *this;
}

std::size_t SweepResult::censored_points() const noexcept {
  std::size_t n = 0;
  for (const auto& c : curves) {
    n += static_cast<std::size_t>(std::count_if(c.points.begin(), c.points.end(),
                                                [](const BerPoint& p) { return p.censored; }));
  }
  return n;
}

const BerCurve& SweepResult::curve(const std::string& label) const {
  for (const auto& c : curves) {
    if (c.label == label) return c;
  }
  throw ArgumentError("no curve labelled " + label);
}

std::string user_label(const UserProfile& u) {
  return "u" + std::to_string(u.id) + "-" + to_string(u.qos) + "-" + u.mcs.label;
}

std::vector<BandResponses> epoch_channels(const Scenario& s, std::uint64_t epoch) {
  const bool baseline = s.mode != ScenarioMode::CrossLayer || s.tfc_baseline;
  return draw_epoch(s, s.users.size() + (baseline ? 1 : 0), 0, epoch).channels;
}

Assignment epoch_assignment(const Scenario& s, const LambdaTable& lambdas, std::uint64_t epoch, double snr_db) {
  const auto users = s.profiles();
  const auto channels = epoch_channels(s, epoch);
  const auto csi = csi_matrix(users, std::span(channels).first(users.size()), snr_db, lambdas);
  return negotiate(allocation_levels(users, csi, s.w_mac, s.w_phy, s.normalization));
}

LambdaTable resolve_lambdas(const Scenario& s, const CalibrationCache& cache,
                            const std::function<void(const std::string&)>& log) {
  std::set<std::string> needed;
  if (s.mode == ScenarioMode::CrossLayer) {
    for (const auto& u : s.users) needed.insert(u.mcs);
  }
  LambdaTable table;
  for (const auto& label : needed) {
    if (const auto it = s.lambda_overrides.find(label); it != s.lambda_overrides.end()) {
      table.set(label, it->second);
      continue;
    }
    const auto& mcs = mcs_by_label(label);
    AwgnOptions awgn_opts;
    awgn_opts.seed = kCalibrationSeed;
    awgn_opts.max_bits = 50'000'000;
    if (log) log("AWGN reference for MCS " + label);
    const auto ref = cache.awgn(mcs, awgn_grid(), awgn_opts);
    CalibrationOptions cal_opts;
    cal_opts.seed = kCalibrationSeed;
    if (log) log("calibrating lambda for MCS " + label + " on " + to_string(s.channel_model));
    const auto cal = cache.lambda(mcs, s.channel_model, kCalibrationEnsemble, calibration_grid(), ref, cal_opts);
    if (cal.underdetermined && log) log("warning: lambda calibration underdetermined for MCS " + label + "; using 1");
    if (log) {
      log("lambda[" + label + "] = " + format_double(cal.lambda) + " (mismatch " + format_double(cal.objective) +
          " vs " + format_double(cal.objective_unit_lambda) + " at lambda=1, " + std::to_string(cal.samples) +
          " samples)");
    }
    table.set(label, cal.lambda);
  }
  return table;
}

SweepResult run_ber_sweep(const Scenario& s, const LambdaTable& lambdas, const RunOptions& options) {
  s.validate();
  const auto users = s.profiles();
  const auto grid = s.snr_grid();
  const bool cross = s.mode == ScenarioMode::CrossLayer;
  const bool baseline = !cross || s.tfc_baseline;
  const std::size_t baseline_index = users.size();
  const std::size_t num_channels = users.size() + (baseline ? 1 : 0);
  const std::size_t first_channel = cross ? 0 : baseline_index;
  const int frames_per_epoch = s.frames_per_superframe * s.superframes_per_realization;
  const auto& base_mcs = baseline_mcs(s);
  const auto hash = s.hash();

  SweepResult result;
  if (cross) {
    for (const auto& u : users) {
      result.curves.push_back({user_label(u), {}, hash, s.seed, u.id, u.qos, u.mcs.label});
    }
  }
  if (baseline) result.curves.push_back({"tfc-" + base_mcs.label, {}, hash, s.seed, 0, QosClass::Soft, base_mcs.label});
  const std::size_t num_curves = result.curves.size();

  std::vector<std::vector<LinkCounts>> totals(grid.size(), std::vector<LinkCounts>(num_curves));
  result.epochs.assign(grid.size(), 0);
  std::vector<std::size_t> active(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) active[p] = p;

  const auto run_item = [&](const Epoch& ep, std::size_t p, std::uint64_t e) {
    ItemResult out;
    out.counts.resize(num_curves);
    const double esn0 = s.noiseless ? std::numeric_limits<double>::infinity() : grid[p];
    if (cross) {
      const auto csi = csi_matrix(users, std::span(ep.channels).first(users.size()), grid[p], lambdas);
      const auto devices = device_states(users, csi);
      const auto ex = beacon_exchange(devices, csi, s.w_mac, s.w_phy, {s.normalization, {}, std::nullopt});
      const auto& assignment = ex.per_device.front();
      const auto direct = negotiate(allocation_levels(users, csi, s.w_mac, s.w_phy, s.normalization));
      const bool agree = std::all_of(ex.per_device.begin(), ex.per_device.end(),
                                     [&](const Assignment& a) { return a == direct; });
      const auto sf = build_superframe(assignment, s.beacon_mas);
      for (int k = 0; k < s.superframes_per_realization; ++k) {
        if (!agree) ++out.fairness.allocation_mismatches;
        account_superframe(sf, users, assignment, out.fairness);
      }
      for (std::size_t u = 0; u < users.size(); ++u) {
        const int band = assignment.band_of(users[u].id);
        const auto sharing = assignment.bands[static_cast<std::size_t>(band - 1)].size();
        const auto frames = std::max<std::size_t>(1, static_cast<std::size_t>(frames_per_epoch) / sharing);
        LinkSimulator link(users[u].mcs, ep.channels[u], BandPlan::fixed(band));
        Rng rng(derive_seed(s.seed, "noise", {p, e, u}));
        out.counts[u] = link.run_frames(frames, esn0, rng);
      }
    }
    if (baseline) {
      LinkSimulator link(base_mcs, ep.channels[baseline_index], BandPlan::tfc(s.tfc_pattern));
      Rng rng(derive_seed(s.seed, "noise", {p, e, baseline_index}));
      out.counts.back() = link.run_frames(static_cast<std::size_t>(frames_per_epoch), esn0, rng);
    }
    return out;
  };

  const std::size_t batch = std::max<std::size_t>(options.batch, 1);
  std::uint64_t epoch0 = 0;
  while (!active.empty()) {
    std::vector<Epoch> epochs(batch);
    parallel_for(batch, options.threads,
                 [&](std::size_t i) { epochs[i] = draw_epoch(s, num_channels, first_channel, epoch0 + i); });

    std::vector<ItemResult> items(active.size() * batch);
    parallel_for(items.size(), options.threads, [&](std::size_t i) {
      const auto p = active[i / batch];
      const auto e = i % batch;
      items[i] = run_item(epochs[e], p, epoch0 + e);
    });

    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto p = active[i / batch];
      for (std::size_t c = 0; c < num_curves; ++c) totals[p][c] += items[i].counts[c];
      result.fairness += items[i].fairness;
    }
    epoch0 += batch;

    std::vector<std::size_t> still;
    for (const auto p : active) {
      result.epochs[p] = epoch0;
      const bool done =
          epoch0 >= s.realizations && std::all_of(totals[p].begin(), totals[p].end(), [&](const LinkCounts& c) {
            return c.bit_errors >= s.min_errors || c.bits >= s.max_bits;
          });
      if (!done) still.push_back(p);
    }
    if (options.log && still.size() != active.size()) {
      options.log(s.name + ": " + std::to_string(grid.size() - still.size()) + "/" + std::to_string(grid.size()) +
                  " SNR points done after " + std::to_string(epoch0) + " epochs");
    }
    active = std::move(still);
  }

  for (std::size_t c = 0; c < num_curves; ++c) {
    for (std::size_t p = 0; p < grid.size(); ++p) {
      BerPoint pt;
      pt.snr_db = grid[p];
      pt.bit_errors = totals[p][c].bit_errors;
      pt.bits_tested = totals[p][c].bits;
      pt.censored = pt.bit_errors < s.min_errors;
      result.curves[c].points.push_back(pt);
    }
  }
  return result;
}

double snr_at_ber(const BerCurve& curve, double target) {
  const auto log_ber = [](const BerPoint& p) {
    const double errors = p.bit_errors ? static_cast<double>(p.bit_errors) : 0.5;
    return std::log10(errors / static_cast<double>(std::max<std::uint64_t>(p.bits_tested, 1)));
  };
  const double t = std::log10(target);
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const double y0 = log_ber(curve.points[i]);
    const double y1 = log_ber(curve.points[i + 1]);
    if (y0 >= t && y1 < t) {
      const double x0 = curve.points[i].snr_db;
      const double x1 = curve.points[i + 1].snr_db;
      return x0 + (t - y0) / (y1 - y0) * (x1 - x0);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<BalanceRow> run_balance_sweep(const Scenario& s, std::span<const double> ratios,
                                          const LambdaTable& lambdas, const RunOptions& options,
                                          double target_ber) {
  if (ratios.empty()) throw ArgumentError("run_balance_sweep needs at least one ratio");
  std::vector<double> sorted(ratios.begin(), ratios.end());
  std::sort(sorted.begin(), sorted.end());

  Scenario base = s;
  base.mode = ScenarioMode::TfcSingleUser;
  const auto baseline_run = run_ber_sweep(base, lambdas, options);
  const double baseline_snr = snr_at_ber(baseline_run.curves.back(), target_ber);
  if (options.log) options.log("baseline SNR at target BER: " + format_double(baseline_snr) + " dB");

  std::vector<BalanceRow> rows;
  for (double ratio : sorted) {
    Scenario sc = s;
    sc.mode = ScenarioMode::CrossLayer;
    sc.tfc_baseline = false;
    sc.w_mac = ratio;
    sc.w_phy = 1.0;
    const auto run = run_ber_sweep(sc, lambdas, options);
    BalanceRow row;
    row.ratio = ratio;
    double sum = 0.0;
    for (const auto& c : run.curves) {
      if (c.qos != QosClass::Hard) continue;
      row.user_gain_db.push_back(baseline_snr - snr_at_ber(c, target_ber));
      sum += row.user_gain_db.back();
    }
    row.gain_db = row.user_gain_db.empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : sum / static_cast<double>(row.user_gain_db.size());
    if (options.log) options.log("ratio " + format_double(ratio) + ": gain " + format_double(row.gain_db) + " dB");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace uwbsim

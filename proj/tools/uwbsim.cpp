// uwbsim command-line front end.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uwbsim/calibration_cache.hpp"
#include "uwbsim/channel_model.hpp"
#include "uwbsim/csv.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/harness.hpp"
#include "uwbsim/mac_layer.hpp"
#include "uwbsim/numfmt.hpp"
#include "uwbsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace uwbsim;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out = "results";
  std::string cache;
  unsigned threads = 1;
  std::vector<std::string> lambdas;  // MCS=VALUE
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Override the scenario's master seed");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--cache", c.cache, "Calibration cache directory (default: <out>/calibration)");
  cmd->add_option("-j,--threads", c.threads, "Worker threads")->check(CLI::Range(1U, 256U))->capture_default_str();
  cmd->add_option("--lambda", c.lambdas, "Fix lambda for an MCS, e.g. --lambda 320=2.0");
  cmd->add_flag("-q,--quiet", c.quiet, "Only print results");
}

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::function<void(const std::string&)> logger(const Common& c, const Clock& clock) {
  if (c.quiet) return {};
  return [&clock](const std::string& msg) {
    std::cerr << '[' << std::fixed << std::setprecision(1) << clock.seconds() << "s] " << msg << '\n';
    std::cerr.unsetf(std::ios::floatfield);
  };
}

void apply_common(const Common& c, Scenario& s) {
  if (c.seed) s.seed = *c.seed;
  for (const auto& kv : c.lambdas) {
    const auto eq = kv.find('=');
    const auto value = eq == std::string::npos ? std::nullopt : parse_double(kv.substr(eq + 1));
    if (!value) throw ConfigError("--lambda expects MCS=VALUE, got '" + kv + "'");
    s.lambda_overrides[kv.substr(0, eq)] = *value;
  }
  s.validate();
}

CalibrationCache cache_of(const Common& c) {
  return CalibrationCache(c.cache.empty() ? fs::path(c.out) / "calibration" : fs::path(c.cache));
}

Scenario scenario_from(const std::string& arg) {
  for (const auto& name : preset_names()) {
    if (arg == name) return preset(name);
  }
  return load_scenario(arg);
}

void print_summary(const SweepResult& r) {
  for (const auto& c : r.curves) {
    std::cout << c.label << ": SNR@1e-3 = " << format_double(snr_at_ber(c, 1e-3))
              << " dB, SNR@1e-4 = " << format_double(snr_at_ber(c, 1e-4)) << " dB\n";
  }
  const auto& f = r.fairness;
  std::cout << "superframes: " << f.superframes << ", shared/dedicated pairs: " << f.pairs_checked
            << ", share violations: " << f.share_violations << ", allocation mismatches: " << f.allocation_mismatches
            << '\n';
  std::cout << "censored points: " << r.censored_points() << '\n';
}

int run_scenario(Scenario s, const Common& c, bool strict) {
  Clock clock;
  apply_common(c, s);
  const auto log = logger(c, clock);
  const auto lambdas = resolve_lambdas(s, cache_of(c), log);
  RunOptions opts;
  opts.threads = c.threads;
  opts.log = log;
  const auto result = run_ber_sweep(s, lambdas, opts);
  const auto path = fs::path(c.out) / (s.name + ".csv");
  emit_csv(result.curves, path);
  print_summary(result);
  std::cout << "wrote " << path.string() << '\n';
  if (result.censored_points() > 0) {
    std::cerr << "warning: " << result.censored_points() << " point(s) stopped at max_bits before min_errors\n";
    if (strict) return 3;
  }
  return 0;
}

int run_balance(Scenario s, const Common& c, std::vector<double> ratios, double target) {
  Clock clock;
  apply_common(c, s);
  if (ratios.empty()) ratios = s.balance_ratios;
  if (ratios.empty()) throw ConfigError("no ratios given (use --ratios or a 'ratios' key)");
  const auto log = logger(c, clock);
  const auto lambdas = resolve_lambdas(s, cache_of(c), log);
  RunOptions opts;
  opts.threads = c.threads;
  opts.log = log;
  const auto rows = run_balance_sweep(s, ratios, lambdas, opts, target);
  const auto path = fs::path(c.out) / (s.name + "_balance.csv");
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << "ratio,gain_db\n";
  for (const auto& r : rows) {
    out << format_double(r.ratio) << ',' << format_double(r.gain_db) << '\n';
    std::cout << "W_MAC/W_PHY = " << format_double(r.ratio) << ": hard-QoS gain " << format_double(r.gain_db)
              << " dB\n";
  }
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-band OFDM UWB cross-layer allocation simulator"};
  app.require_subcommand(1);

  Common common;

  auto* calibrate = app.add_subcommand("calibrate", "Build AWGN references and fit lambda for the given MCSs");
  std::vector<std::string> cal_mcs;
  std::string cal_cm = "CM1";
  calibrate->add_option("mcs", cal_mcs, "MCS labels (data rates), default: all")->expected(0, -1);
  calibrate->add_option("--channel-model", cal_cm, "Ensemble channel model")->capture_default_str();
  add_common(calibrate, common);

  auto* run = app.add_subcommand("run", "Run a BER sweep from a scenario file or preset name");
  std::string run_target;
  run->add_option("scenario", run_target, "Scenario file or preset (fig5, fig6, fig7, fig8)")->required();
  add_common(run, common);

  auto* balance = app.add_subcommand("sweep-balance", "Hard-QoS gain versus W_MAC/W_PHY");
  std::string bal_target = "fig8";
  std::vector<double> ratios;
  double target_ber = 1e-3;
  balance->add_option("scenario", bal_target, "Scenario file or preset")->capture_default_str();
  balance->add_option("--ratios", ratios, "W_MAC/W_PHY values (default: scenario 'ratios')")->delimiter(',');
  balance->add_option("--target-ber", target_ber, "BER at which gains are measured")->capture_default_str();
  add_common(balance, common);

  auto* presets = app.add_subcommand("presets", "Run a built-in experiment; nonzero exit on censored points");
  std::string preset_name;
  presets->add_option("name", preset_name, "fig5, fig6, fig7 or fig8")
      ->required()
      ->check(CLI::IsMember({"fig5", "fig6", "fig7", "fig8"}));
  add_common(presets, common);

  auto* show = app.add_subcommand("show-preset", "Print a preset in scenario-file form");
  std::string show_name;
  show->add_option("name", show_name)->required()->check(CLI::IsMember({"fig5", "fig6", "fig7", "fig8"}));

  auto* dump_channel = app.add_subcommand("dump-channel", "Print one channel realization as 'delay_ns gain'");
  std::string dc_cm = "CM1";
  std::uint64_t dc_seed = 1;
  dump_channel->add_option("--channel-model", dc_cm)->capture_default_str();
  dump_channel->add_option("--seed", dc_seed)->capture_default_str();

  auto* dump_sf = app.add_subcommand("dump-superframe", "Print the MAS schedule of one channel epoch");
  std::string ds_target;
  std::uint64_t ds_epoch = 0;
  double ds_snr = 10.0;
  dump_sf->add_option("scenario", ds_target, "Scenario file or preset")->required();
  dump_sf->add_option("--epoch", ds_epoch)->capture_default_str();
  dump_sf->add_option("--snr", ds_snr, "Es/N0 in dB used for the CSI")->capture_default_str();
  add_common(dump_sf, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*calibrate) {
      Clock clock;
      const auto log = logger(common, clock);
      Scenario s;
      s.name = "calibrate";
      s.channel_model = parse_channel_model(cal_cm);
      if (cal_mcs.empty()) {
        for (const auto& m : mcs_table()) cal_mcs.push_back(m.label);
      }
      for (const auto& m : cal_mcs) s.users.push_back({QosClass::Soft, m, std::nullopt});
      apply_common(common, s);
      const auto table = resolve_lambdas(s, cache_of(common), log);
      const auto path = fs::path(common.out) / "lambda.txt";
      fs::create_directories(path.parent_path());
      std::ofstream out(path, std::ios::binary);
      write_lambda_table(out, table);
      write_lambda_table(std::cout, table);
      std::cout << "wrote " << path.string() << '\n';
      return 0;
    }
    if (*run) return run_scenario(scenario_from(run_target), common, false);
    if (*balance) return run_balance(scenario_from(bal_target), common, ratios, target_ber);
    if (*presets) {
      if (preset_name == "fig8") return run_balance(preset("fig8"), common, {}, 1e-3);
      return run_scenario(preset(preset_name), common, true);
    }
    if (*show) {
      std::cout << preset(show_name).to_text();
      return 0;
    }
    if (*dump_channel) {
      const auto r = generate_realization(ChannelModelParams::preset(parse_channel_model(dc_cm)), dc_seed);
      write_realization(std::cout, r);
      return 0;
    }
    if (*dump_sf) {
      auto s = scenario_from(ds_target);
      apply_common(common, s);
      Clock clock;
      const auto lambdas = resolve_lambdas(s, cache_of(common), logger(common, clock));
      const auto a = epoch_assignment(s, lambdas, ds_epoch, ds_snr);
      std::cerr << format_assignment(a);
      write_superframe(std::cout, build_superframe(a, s.beacon_mas));
      return 0;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

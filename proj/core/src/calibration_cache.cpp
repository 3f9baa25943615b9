#include "uwbsim/calibration_cache.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "uwbsim/errors.hpp"
#include "uwbsim/numfmt.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

namespace {

std::vector<std::string> fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string f; in >> f;) out.push_back(f);
  return out;
}

std::string grid_text(std::span<const double> grid) {
  std::string s;
  for (double g : grid) s += format_double(g) + ",";
  return s;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string cache_key(std::string_view settings) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(settings)));
  return buf;
}

void write_awgn_reference(std::ostream& os, const AwgnReference& ref) {
  os << "# mcs " << ref.mcs_label << "\n";
  for (std::size_t i = 0; i < ref.points.size(); ++i) {
    os << format_double(ref.points[i].snr_db) << ' ' << format_double(ref.ber[i]) << '\n';
  }
}

AwgnReference read_awgn_reference(std::istream& is, const std::string& mcs_label) {
  AwgnReference ref;
  ref.mcs_label = mcs_label;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto f = fields(line);
    if (f.empty()) continue;
    const auto snr = f.size() == 2 ? parse_double(f[0]) : std::nullopt;
    const auto ber = f.size() == 2 ? parse_double(f[1]) : std::nullopt;
    if (!snr || !ber) throw ConfigError("AWGN reference line " + std::to_string(lineno) + ": expected 'snr_db ber'");
    BerPoint p;
    p.snr_db = *snr;
    ref.points.push_back(p);
    ref.ber.push_back(*ber);
  }
  if (ref.points.empty()) throw ConfigError("AWGN reference for MCS " + mcs_label + " is empty");
  return ref;
}

void write_lambda_table(std::ostream& os, const LambdaTable& table) {
  for (const auto& [label, lambda] : table.values()) os << label << ' ' << format_double(lambda) << '\n';
}

LambdaTable read_lambda_table(std::istream& is) {
  LambdaTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto f = fields(line);
    if (f.empty()) continue;
    const auto lambda = f.size() == 2 ? parse_double(f[1]) : std::nullopt;
    if (!lambda) throw ConfigError("lambda table line " + std::to_string(lineno) + ": expected 'mcs lambda'");
    table.set(f[0], *lambda);
  }
  return table;
}

AwgnReference CalibrationCache::awgn(const McsConfig& mcs, std::span<const double> grid,
                                     const AwgnOptions& options) const {
  std::ostringstream settings;
  settings << "awgn|" << mcs.label << '|' << options.seed << '|' << grid_text(grid) << '|' << options.min_errors
           << '|' << options.max_bits << '|' << format_double(options.stop_below_ber) << '|'
           << options.link.uncoded;
  const auto path = dir_ / ("awgn_" + mcs.label + "_" + cache_key(settings.str()) + ".txt");

  if (!dir_.empty()) {
    if (std::ifstream in(path); in) return read_awgn_reference(in, mcs.label);
  }
  auto ref = awgn_reference(mcs, grid, options);
  if (!dir_.empty()) {
    std::ostringstream out;
    write_awgn_reference(out, ref);
    write_atomically(path, out.str());
  }
  return ref;
}

CalibrationResult CalibrationCache::lambda(const McsConfig& mcs, ChannelModelId cm, std::size_t ensemble_size,
                                           std::span<const double> grid, const AwgnReference& reference,
                                           const CalibrationOptions& options) const {
  std::ostringstream settings;
  settings << "lambda|" << mcs.label << '|' << to_string(cm) << '|' << ensemble_size << '|' << grid_text(grid)
           << '|' << options.seed << '|' << options.min_errors << '|' << options.max_bits << '|'
           << format_double(options.lambda_min) << '|' << format_double(options.lambda_max) << '|'
           << format_double(options.ber_low) << '|' << format_double(options.ber_high) << '|'
           << options.coarse_points << '|';
  for (std::size_t i = 0; i < reference.points.size(); ++i) {
    settings << format_double(reference.points[i].snr_db) << ':' << format_double(reference.ber[i]) << ',';
  }
  const auto path = dir_ / ("lambda_" + mcs.label + "_" + cache_key(settings.str()) + ".txt");

  if (!dir_.empty()) {
    if (std::ifstream in(path); in) {
      CalibrationResult r;
      std::string line;
      while (std::getline(in, line)) {
        const auto f = fields(line);
        if (f.size() == 3 && f[0] == "#") {
          const auto v = parse_double(f[2]);
          if (!v) continue;
          if (f[1] == "objective") r.objective = *v;
          if (f[1] == "objective_unit_lambda") r.objective_unit_lambda = *v;
          if (f[1] == "samples") r.samples = static_cast<std::size_t>(*v);
          if (f[1] == "underdetermined") r.underdetermined = *v != 0.0;
        } else if (f.size() == 2 && f[0] == mcs.label) {
          if (const auto v = parse_double(f[1])) r.lambda = *v;
        }
      }
      return r;
    }
  }

  const auto params = ChannelModelParams::preset(cm);
  std::vector<ChannelRealization> ensemble;
  ensemble.reserve(ensemble_size);
  for (std::size_t i = 0; i < ensemble_size; ++i) {
    ensemble.push_back(without_shadowing(
        generate_realization(params, derive_seed(options.seed, "calibration-channel", {static_cast<std::uint64_t>(i)}))));
  }
  auto r = calibrate_lambda(mcs, ensemble, grid, reference, options);
  if (!dir_.empty()) {
    std::ostringstream out;
    out << "# objective " << format_double(r.objective) << '\n'
        << "# objective_unit_lambda " << format_double(r.objective_unit_lambda) << '\n'
        << "# samples " << r.samples << '\n'
        << "# underdetermined " << (r.underdetermined ? 1 : 0) << '\n'
        << mcs.label << ' ' << format_double(r.lambda) << '\n';
    write_atomically(path, out.str());
  }
  return r;
}

}  // namespace uwbsim

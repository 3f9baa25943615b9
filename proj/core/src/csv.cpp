#include "uwbsim/csv.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "uwbsim/errors.hpp"
#include "uwbsim/numfmt.hpp"

namespace uwbsim {

void write_csv(std::ostream& os, std::span<const BerCurve> curves) {
  std::vector<const BerCurve*> order;
  for (const auto& c : curves) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(), [](const BerCurve* a, const BerCurve* b) { return a->label < b->label; });

  os << kCsvHeader << '\n';
  for (const auto* c : order) {
    auto points = c->points;
    std::stable_sort(points.begin(), points.end(), [](const BerPoint& a, const BerPoint& b) { return a.snr_db < b.snr_db; });
    for (const auto& p : points) {
      os << c->label << ',' << format_double(p.snr_db) << ',' << format_double(p.ber()) << ',' << p.bit_errors << ','
         << p.bits_tested << ',' << (p.censored ? 1 : 0) << '\n';
    }
  }
}

void emit_csv(std::span<const BerCurve> curves, const std::filesystem::path& path) {
  if (curves.empty()) throw ArgumentError("emit_csv: no curves");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(out, curves);
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::vector<BerCurve> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw ConfigError("CSV: missing or unexpected header");
  std::vector<BerCurve> curves;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) f.push_back(cell);
    const auto bad = [&] { return ConfigError("CSV line " + std::to_string(lineno) + ": malformed row"); };
    if (f.size() != 6) throw bad();
    const auto snr = parse_double(f[1]);
    const auto errors = parse_integer<std::uint64_t>(f[3]);
    const auto bits = parse_integer<std::uint64_t>(f[4]);
    if (!snr || !parse_double(f[2]) || !errors || !bits || (f[5] != "0" && f[5] != "1")) throw bad();
    if (curves.empty() || curves.back().label != f[0]) {
      curves.emplace_back();
      curves.back().label = f[0];
    }
    curves.back().points.push_back({*snr, *errors, *bits, f[5] == "1"});
  }
  return curves;
}

}  // namespace uwbsim

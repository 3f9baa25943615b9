#include "uwbsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uwbsim/errors.hpp"
#include "uwbsim/mac_layer.hpp"
#include "uwbsim/mcs.hpp"
#include "uwbsim/numfmt.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool known_mcs(const std::string& label) {
  for (const auto& m : mcs_table()) {
    if (m.label == label) return true;
  }
  return false;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

// Collects problems while parsing so that one pass reports all of them.
class Parser {
 public:
  Scenario parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const auto line = trim(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        fail("expected 'key = value'");
        continue;
      }
      set(trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
    }
    if (problems_.empty()) {
      try {
        s_.validate();
      } catch (const ScenarioError& e) {
        problems_.insert(problems_.end(), e.problems().begin(), e.problems().end());
      }
    }
    if (!problems_.empty()) throw ScenarioError(problems_);
    return s_;
  }

 private:
  void fail(const std::string& what) { problems_.push_back("line " + std::to_string(line_) + ": " + what); }

  std::optional<double> number(const std::string& key, const std::string& v) {
    auto d = parse_double(v);
    if (!d || !std::isfinite(*d)) fail(key + ": expected a number, got '" + v + "'");
    return d;
  }

  template <class Int>
  std::optional<Int> integer(const std::string& key, const std::string& v) {
    auto i = parse_integer<Int>(v);
    if (!i) fail(key + ": expected an integer, got '" + v + "'");
    return i;
  }

  std::optional<bool> boolean(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key + ": expected true or false, got '" + v + "'");
    return std::nullopt;
  }

  void set(const std::string& key, const std::string& v) {
    if (key == "name") {
      if (v.empty()) fail("name: empty");
      s_.name = v;
    } else if (key == "mode") {
      if (v == "cross-layer") {
        s_.mode = ScenarioMode::CrossLayer;
      } else if (v == "wimedia-tfc-single-user") {
        s_.mode = ScenarioMode::TfcSingleUser;
      } else {
        fail("mode: expected cross-layer or wimedia-tfc-single-user, got '" + v + "'");
      }
    } else if (key == "channel_model") {
      try {
        s_.channel_model = parse_channel_model(v);
      } catch (const std::invalid_argument& e) {
        fail(std::string("channel_model: ") + e.what());
      }
    } else if (key == "user") {
      user(v);
    } else if (key == "k") {
      if (auto d = number(key, v)) s_.k = *d;
    } else if (key == "w_mac") {
      if (auto d = number(key, v)) s_.w_mac = *d;
    } else if (key == "w_phy") {
      if (auto d = number(key, v)) s_.w_phy = *d;
    } else if (key == "normalization") {
      try {
        s_.normalization = parse_al_normalization(v);
      } catch (const std::invalid_argument& e) {
        fail(std::string("normalization: ") + e.what());
      }
    } else if (key == "snr_start") {
      if (auto d = number(key, v)) s_.snr_start_db = *d;
    } else if (key == "snr_stop") {
      if (auto d = number(key, v)) s_.snr_stop_db = *d;
    } else if (key == "snr_step") {
      if (auto d = number(key, v)) s_.snr_step_db = *d;
    } else if (key == "noiseless") {
      if (auto b = boolean(key, v)) s_.noiseless = *b;
    } else if (key == "realizations") {
      if (auto i = integer<std::uint64_t>(key, v)) s_.realizations = *i;
    } else if (key == "min_errors") {
      if (auto i = integer<std::uint64_t>(key, v)) s_.min_errors = *i;
    } else if (key == "max_bits") {
      if (auto i = integer<std::uint64_t>(key, v)) s_.max_bits = *i;
    } else if (key == "frames_per_superframe") {
      if (auto i = integer<int>(key, v)) s_.frames_per_superframe = *i;
    } else if (key == "superframes_per_realization") {
      if (auto i = integer<int>(key, v)) s_.superframes_per_realization = *i;
    } else if (key == "bp_mas") {
      if (auto i = integer<int>(key, v)) s_.beacon_mas = *i;
    } else if (key == "include_shadowing") {
      if (auto b = boolean(key, v)) s_.include_shadowing = *b;
    } else if (key == "seed") {
      if (auto i = integer<std::uint64_t>(key, v)) s_.seed = *i;
    } else if (key == "baseline") {
      if (v == "tfc") {
        s_.tfc_baseline = true;
      } else if (v == "none") {
        s_.tfc_baseline = false;
      } else {
        fail("baseline: expected tfc or none, got '" + v + "'");
      }
    } else if (key == "baseline_mcs") {
      s_.baseline_mcs = v;
    } else if (key == "tfc_pattern") {
      s_.tfc_pattern.clear();
      for (const auto& f : split(v, ',')) {
        if (auto i = integer<int>(key, f)) s_.tfc_pattern.push_back(*i);
      }
    } else if (key == "ratios") {
      s_.balance_ratios.clear();
      for (const auto& f : split(v, ',')) {
        if (auto d = number(key, f)) s_.balance_ratios.push_back(*d);
      }
    } else if (key.starts_with("lambda.")) {
      if (auto d = number(key, v)) s_.lambda_overrides[key.substr(7)] = *d;
    } else {
      fail("unknown key '" + key + "'");
    }
  }

  void user(const std::string& v) {
    const auto w = words(v);
    if (w.size() < 2 || w.size() > 3) {
      fail("user: expected '<hard|soft> <mcs> [weight=<q>]'");
      return;
    }
    UserSpec u;
    if (w[0] == "hard" || w[0] == "soft") {
      u.qos = parse_qos_class(w[0]);
    } else {
      fail("user: QoS class must be hard or soft, got '" + w[0] + "'");
    }
    u.mcs = w[1];
    if (w.size() == 3) {
      if (!w[2].starts_with("weight=")) {
        fail("user: unexpected '" + w[2] + "'");
      } else if (auto d = number("weight", w[2].substr(7))) {
        u.weight = *d;
      }
    }
    s_.users.push_back(u);
  }

  Scenario s_;
  std::vector<std::string> problems_;
  int line_ = 0;
};

constexpr std::string_view kFig5 = R"(name = fig5
mode = cross-layer
channel_model = CM1
user = hard 480
user = soft 400
user = soft 400
snr_start = 8
snr_stop = 20
snr_step = 2
realizations = 1000
min_errors = 300
max_bits = 10000000
seed = 5
)";

constexpr std::string_view kFig6 = R"(name = fig6
mode = cross-layer
channel_model = CM1
user = hard 320
user = soft 320
user = soft 320
baseline = tfc
snr_start = 2
snr_stop = 14
snr_step = 1
realizations = 1000
min_errors = 300
max_bits = 10000000
seed = 6
)";

constexpr std::string_view kFig7 = R"(name = fig7
mode = cross-layer
channel_model = CM1
user = hard 320 weight=0.4
user = hard 320 weight=0.3
user = soft 320
user = soft 320
baseline = tfc
snr_start = 2
snr_stop = 14
snr_step = 1
realizations = 1000
min_errors = 300
max_bits = 10000000
seed = 7
)";

constexpr std::string_view kFig8 = R"(name = fig8
mode = cross-layer
channel_model = CM1
user = hard 320 weight=0.4
user = hard 320 weight=0.3
user = soft 320
user = soft 320
baseline = tfc
snr_start = 3
snr_stop = 11
snr_step = 1
realizations = 400
min_errors = 100
max_bits = 2000000
seed = 8
ratios = 0,0.25,0.5,1,2,4,10
)";

}  // namespace

std::string to_string(ScenarioMode m) {
  return m == ScenarioMode::CrossLayer ? "cross-layer" : "wimedia-tfc-single-user";
}

std::vector<double> Scenario::snr_grid() const {
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((snr_stop_db - snr_start_db) / snr_step_db + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) grid.push_back(snr_start_db + static_cast<double>(i) * snr_step_db);
  return grid;
}

std::vector<UserProfile> Scenario::profiles() const {
  std::vector<UserProfile> out;
  for (std::size_t i = 0; i < users.size(); ++i) {
    UserProfile p;
    p.id = static_cast<UserId>(i + 1);
    p.qos = users[i].qos;
    p.mcs = mcs_by_label(users[i].mcs);
    p.weight_override = users[i].weight;
    out.push_back(p);
  }
  resolve_weights(out, k);
  return out;
}

void Scenario::validate() const {
  std::vector<std::string> p;
  if (!(snr_step_db > 0.0)) p.push_back("snr_step must be > 0");
  if (snr_stop_db < snr_start_db) p.push_back("snr_stop must not be below snr_start");
  if (users.empty()) p.push_back("at least one user is required");
  for (std::size_t i = 0; i < users.size(); ++i) {
    const auto& u = users[i];
    if (!known_mcs(u.mcs)) p.push_back("user " + std::to_string(i + 1) + ": unknown MCS '" + u.mcs + "'");
    if (u.weight && !(*u.weight > 0.0)) p.push_back("user " + std::to_string(i + 1) + ": weight must be > 0");
  }
  if (k && !(*k > 1.0)) p.push_back("k must be greater than 1");
  if (w_mac < 0.0 || w_phy < 0.0) p.push_back("w_mac and w_phy must be non-negative");
  if (w_mac == 0.0 && w_phy == 0.0) p.push_back("w_mac and w_phy cannot both be zero");
  if (realizations == 0) p.push_back("realizations must be >= 1");
  if (min_errors == 0) p.push_back("min_errors must be >= 1");
  if (max_bits == 0) p.push_back("max_bits must be >= 1");
  if (frames_per_superframe < 2 || frames_per_superframe % 2 != 0) {
    p.push_back("frames_per_superframe must be even and >= 2");
  }
  if (superframes_per_realization < 1) p.push_back("superframes_per_realization must be >= 1");
  if (beacon_mas < 0 || beacon_mas >= kMasPerSuperframe) p.push_back("bp_mas must be in 0..255");
  if (!baseline_mcs.empty() && !known_mcs(baseline_mcs)) p.push_back("unknown baseline_mcs '" + baseline_mcs + "'");
  if (tfc_pattern.empty()) p.push_back("tfc_pattern must not be empty");
  for (int b : tfc_pattern) {
    if (b < 1 || b > kNumBands) p.push_back("tfc_pattern entries must be bands 1..3");
  }
  for (const auto& [label, lambda] : lambda_overrides) {
    if (!known_mcs(label)) p.push_back("lambda override for unknown MCS '" + label + "'");
    if (!(lambda > 0.0)) p.push_back("lambda." + label + " must be > 0");
  }
  for (double r : balance_ratios) {
    if (!(r >= 0.0)) p.push_back("ratios must be non-negative");
  }
  if (!p.empty()) throw ScenarioError(p);
}

std::string Scenario::to_text() const {
  std::ostringstream os;
  os << "name = " << name << '\n'
     << "mode = " << to_string(mode) << '\n'
     << "channel_model = " << to_string(channel_model) << '\n';
  for (const auto& u : users) {
    os << "user = " << to_string(u.qos) << ' ' << u.mcs;
    if (u.weight) os << " weight=" << format_double(*u.weight);
    os << '\n';
  }
  if (k) os << "k = " << format_double(*k) << '\n';
  os << "w_mac = " << format_double(w_mac) << '\n'
     << "w_phy = " << format_double(w_phy) << '\n'
     << "normalization = " << to_string(normalization) << '\n'
     << "snr_start = " << format_double(snr_start_db) << '\n'
     << "snr_stop = " << format_double(snr_stop_db) << '\n'
     << "snr_step = " << format_double(snr_step_db) << '\n'
     << "noiseless = " << (noiseless ? "true" : "false") << '\n'
     << "realizations = " << realizations << '\n'
     << "min_errors = " << min_errors << '\n'
     << "max_bits = " << max_bits << '\n'
     << "frames_per_superframe = " << frames_per_superframe << '\n'
     << "superframes_per_realization = " << superframes_per_realization << '\n'
     << "bp_mas = " << beacon_mas << '\n'
     << "include_shadowing = " << (include_shadowing ? "true" : "false") << '\n'
     << "seed = " << seed << '\n'
     << "baseline = " << (tfc_baseline ? "tfc" : "none") << '\n';
  if (!baseline_mcs.empty()) os << "baseline_mcs = " << baseline_mcs << '\n';
  os << "tfc_pattern = ";
  for (std::size_t i = 0; i < tfc_pattern.size(); ++i) os << (i ? "," : "") << tfc_pattern[i];
  os << '\n';
  for (const auto& [label, lambda] : lambda_overrides) os << "lambda." << label << " = " << format_double(lambda) << '\n';
  if (!balance_ratios.empty()) os << "ratios = " << list_text(balance_ratios) << '\n';
  return os.str();
}

std::uint64_t Scenario::hash() const { return fnv1a(to_text()); }

Scenario parse_scenario(std::string_view text) { return Parser{}.parse(text); }

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError({"cannot open scenario file " + path.string()});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

Scenario preset(std::string_view name) {
  if (name == "fig5") return parse_scenario(kFig5);
  if (name == "fig6") return parse_scenario(kFig6);
  if (name == "fig7") return parse_scenario(kFig7);
  if (name == "fig8") return parse_scenario(kFig8);
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig5, fig6, fig7 or fig8)");
}

std::vector<std::string> preset_names() { return {"fig5", "fig6", "fig7", "fig8"}; }

}  // namespace uwbsim

#include "uwbsim/mcs.hpp"

#include <array>
#include <numeric>

#include "uwbsim/errors.hpp"

namespace uwbsim {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw ArgumentError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }

std::string to_string(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational code_rate_value(CodeRate r) noexcept {
  switch (r) {
    case CodeRate::R1_3: return {1, 3};
    case CodeRate::R1_2: return {1, 2};
    case CodeRate::R11_32: return {11, 32};
    case CodeRate::R5_8: return {5, 8};
    case CodeRate::R3_4: return {3, 4};
  }
  return {1, 1};
}

std::string to_string(Modulation m) { return m == Modulation::QPSK ? "QPSK" : "DCM"; }
std::string to_string(CodeRate r) { return to_string(code_rate_value(r)); }

Rational McsConfig::derived_rate() const {
  // bits per symbol / 312.5 ns = bits * 16/5 Mbit/s
  const Rational bits = Rational(2 * 100, 1) * code_rate_value(code_rate);
  const std::int64_t spread = (fds ? 2 : 1) * (tds ? 2 : 1);
  return bits / Rational(spread, 1) * Rational(16, 5);
}

namespace {

// The 200 Mbit/s row uses TDS; without it the row's rate would be 400 Mbit/s.
const std::array<McsConfig, 8> kTable = {{
    {"53.3", {160, 3}, Modulation::QPSK, CodeRate::R1_3, true, true},
    {"80", {80, 1}, Modulation::QPSK, CodeRate::R1_2, true, true},
    {"110", {110, 1}, Modulation::QPSK, CodeRate::R11_32, false, true},
    {"160", {160, 1}, Modulation::QPSK, CodeRate::R1_2, false, true},
    {"200", {200, 1}, Modulation::QPSK, CodeRate::R5_8, false, true},
    {"320", {320, 1}, Modulation::DCM, CodeRate::R1_2, false, false},
    {"400", {400, 1}, Modulation::DCM, CodeRate::R5_8, false, false},
    {"480", {480, 1}, Modulation::DCM, CodeRate::R3_4, false, false},
}};

}  // namespace

std::span<const McsConfig> mcs_table() noexcept { return kTable; }

const McsConfig& mcs_by_label(std::string_view label) {
  for (const auto& m : kTable) {
    if (m.label == label) return m;
  }
  throw ConfigError("no MCS with data rate '" + std::string(label) + "'");
}

}  // namespace uwbsim

#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace uwbsim {

/// Exact nonnegative rational, always stored in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

std::string to_string(const Rational& r);

enum class Modulation { QPSK, DCM };

enum class CodeRate { R1_3, R1_2, R11_32, R5_8, R3_4 };

Rational code_rate_value(CodeRate r) noexcept;
std::string to_string(Modulation m);
std::string to_string(CodeRate r);

/// One row of the WiMedia data-rate table.
struct McsConfig {
  std::string label;     // nominal rate as printed, e.g. "53.3"
  Rational data_rate;    // exact rate in Mbit/s
  Modulation modulation = Modulation::QPSK;
  CodeRate code_rate = CodeRate::R1_2;
  bool fds = false;
  bool tds = false;

  /// 100 tones x 2 bits x code rate / (2^fds * 2^tds) per 312.5 ns, in Mbit/s.
  Rational derived_rate() const;

  /// Coded bits carried by one payload OFDM symbol (before TDS repetition).
  int coded_bits_per_symbol() const noexcept { return fds ? 100 : 200; }

  friend bool operator==(const McsConfig&, const McsConfig&) = default;
};

/// The eight WiMedia configurations, ascending by rate.
std::span<const McsConfig> mcs_table() noexcept;

/// Looks an entry up by label ("320", "53.3", ...). Throws ConfigError.
const McsConfig& mcs_by_label(std::string_view label);

}  // namespace uwbsim

#include "uwbsim/rng.hpp"

#include <array>
#include <cmath>


#include "uwbsim/errors.hpp"

namespace uwbsim {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid scenario";
  for (const auto& p : problems) {
    out += "\n  ";
    out += p;
  }
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

namespace {

struct ZigguratTables {
  std::array<std::uint32_t, 128> k{};
  std::array<double, 128> w{};
  std::array<double, 128> f{};

  ZigguratTables() {
    constexpr double m1 = 2147483648.0;
    constexpr double v = 9.91256303526217e-3;
    double d = kZigguratR;
    double t = d;
    const double q = v / std::exp(-0.5 * d * d);
    k[0] = static_cast<std::uint32_t>((d / q) * m1);
    k[1] = 0;
    w[0] = q / m1;
    w[127] = d / m1;
    f[0] = 1.0;
    f[127] = std::exp(-0.5 * d * d);
    for (int i = 126; i >= 1; --i) {
      d = std::sqrt(-2.0 * std::log(v / d + std::exp(-0.5 * d * d)));
      k[static_cast<std::size_t>(i + 1)] = static_cast<std::uint32_t>((d / t) * m1);
      t = d;
      f[static_cast<std::size_t>(i)] = std::exp(-0.5 * d * d);
      w[static_cast<std::size_t>(i)] = d / m1;
    }
  }

  static constexpr double kZigguratR = 3.442619855899;
};

const ZigguratTables& zig() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

double NormalSampler::operator()(Rng& rng) noexcept {
  const auto& z = zig();
  const auto hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng()));
  const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127U;
  const auto mag = static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz);
  if (mag < z.k[iz]) return hz * z.w[iz];
  return tail(rng, hz, iz);
}

double NormalSampler::tail(Rng& rng, std::int32_t hz, std::uint32_t iz) noexcept {
  const auto& z = zig();
  constexpr double r = ZigguratTables::kZigguratR;
  for (;;) {
    const double x = hz * z.w[iz];
    if (iz == 0) {
      double xt = 0.0, y = 0.0;
      do {
        xt = -std::log(1.0 - uniform01(rng)) / r;
        y = -std::log(1.0 - uniform01(rng));
      } while (y + y < xt * xt);
      return hz > 0 ? r + xt : -r - xt;
    }
    if (z.f[iz] + uniform01(rng) * (z.f[iz - 1] - z.f[iz]) < std::exp(-0.5 * x * x)) return x;
    hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng()));
    iz = static_cast<std::uint32_t>(hz) & 127U;
    const auto mag = static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz);
    if (mag < z.k[iz]) return hz * z.w[iz];
  }
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t h = mix64(master ^ fnv1a(tag));
  for (std::uint64_t idx : indices) {
    h = mix64(h ^ mix64(idx + 0x632be59bd9b4e019ULL));
  }
  return h;
}

}  // namespace uwbsim

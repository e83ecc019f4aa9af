#include "wva/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace wva {
namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  std::array<double, kTerms> coeff{};
  double scale = 0.0;

  WeidemanTable() {
    constexpr int m = 2 * kTerms;
    constexpr int len = 2 * m;
    scale = std::sqrt(kTerms / std::numbers::sqrt2);

    // Samples of exp(-t^2)(L^2 + t^2) on t = L tan(theta/2), stored in
    // fftshift order so that index 0 holds theta = 0.
    std::array<double, len> sample{};
    for (int k = -m + 1; k <= m - 1; ++k) {
      const double theta = k * std::numbers::pi / m;
      const double t = scale * std::tan(theta / 2.0);
      const int slot = ((k + m) % len + len / 2) % len;
      sample[static_cast<std::size_t>(slot)] = std::exp(-t * t) * (scale * scale + t * t);
    }
    for (int j = 1; j <= kTerms; ++j) {
      double acc = 0.0;
      for (int n = 0; n < len; ++n) {
        acc += sample[static_cast<std::size_t>(n)] * std::cos(2.0 * std::numbers::pi * j * n / len);
      }
      coeff[static_cast<std::size_t>(j - 1)] = acc / len;
    }
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

std::complex<double> faddeeva_upper(std::complex<double> z) {
  const auto& t = table();
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> denom = t.scale - i * z;
  const std::complex<double> ratio = (t.scale + i * z) / denom;
  std::complex<double> poly = 0.0;
  for (int j = kTerms - 1; j >= 0; --j) poly = poly * ratio + t.coeff[static_cast<std::size_t>(j)];
  return 2.0 * poly / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

}  // namespace

double hyp1f1_half(double z) {
  const double az = std::abs(z);
  if (az < 1e-6) return 1.0 - z * z / 3.0;
  return std::sqrt(std::numbers::pi) / (2.0 * az) * std::erf(az);
}

std::complex<double> faddeeva(std::complex<double> z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

std::complex<double> erfc(std::complex<double> z) {
  // erfc(z) = exp(-z^2) w(iz); pick the half-plane where w is bounded.
  const std::complex<double> i(0.0, 1.0);
  if (z.real() >= 0.0) return std::exp(-z * z) * faddeeva_upper(i * z);
  return 2.0 - std::exp(-z * z) * faddeeva_upper(-i * z);
}

double dawson(double x) {
  return std::sqrt(std::numbers::pi) / 2.0 * faddeeva_upper({x, 0.0}).imag();
}

}  // namespace wva

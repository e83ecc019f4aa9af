#include "wva/allan.hpp"

#include <algorithm>
#include <cmath>

#include "wva/error.hpp"

namespace wva {

AllanResult allan_variance(const TimeSeries& series, std::size_t n, AllanMode mode) {
  const std::size_t m = series.size();
  require(n >= 1, ErrorKind::kInvalidArgument, "window length must be >= 1");
  require(m >= 2 * n, ErrorKind::kInsufficientData,
          "series of " + std::to_string(m) + " samples is too short for n = " + std::to_string(n));

  // Prefix sums of the centred series; centring keeps large offsets from
  // eating precision.
  double mean = 0.0;
  for (double v : series.samples) mean += v;
  mean /= static_cast<double>(m);
  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + (series.samples[i] - mean);

  const std::size_t windows = m - 2 * n + 1;
  const std::size_t offset = mode == AllanMode::kOverlapping ? n : 1;
  const double inv_n = 1.0 / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < windows; ++k) {
    const double a = (prefix[k + n] - prefix[k]) * inv_n;
    const double b = (prefix[k + offset + n] - prefix[k + offset]) * inv_n;
    acc += (b - a) * (b - a);
  }
  return {acc / (2.0 * static_cast<double>(windows)), windows};
}

std::vector<std::size_t> log_n_grid(std::size_t length, int per_decade) {
  require(per_decade >= 1, ErrorKind::kInvalidArgument, "points per decade must be >= 1");
  std::vector<std::size_t> grid;
  const std::size_t top = length / 2;
  if (top < 1) return grid;
  const double step = 1.0 / per_decade;
  for (int i = 0;; ++i) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, i * step)));
    if (n > top) break;
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  if (grid.back() != top) grid.push_back(top);
  return grid;
}

AllanCurve allan_curve(const TimeSeries& series, std::span<const std::size_t> n_grid, AllanMode mode) {
  series.validate();
  require(std::is_sorted(n_grid.begin(), n_grid.end()), ErrorKind::kInvalidArgument, "n grid must be sorted");
  AllanCurve curve;
  curve.points.reserve(n_grid.size());
  for (std::size_t n : n_grid) {
    const auto r = allan_variance(series, n, mode);
    curve.points.push_back({static_cast<double>(n) * series.dt, r.sigma2, n, r.windows_used});
  }
  return curve;
}

AllanCurve allan_curve(const TimeSeries& series, AllanMode mode) {
  const auto grid = log_n_grid(series.size());
  return allan_curve(series, grid, mode);
}

}  // namespace wva

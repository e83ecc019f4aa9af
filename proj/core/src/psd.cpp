#include "wva/psd.hpp"

#include <cmath>
#include <numbers>

#include "wva/error.hpp"
#include "wva/fft.hpp"

namespace wva {

std::string_view to_string(PsdMethod m) noexcept {
  return m == PsdMethod::kPeriodogram ? "periodogram" : "averaged";
}
std::string_view to_string(WindowFunction w) noexcept { return w == WindowFunction::kHann ? "hann" : "rect"; }

PsdMethod parse_psd_method(std::string_view name) {
  if (name == "periodogram") return PsdMethod::kPeriodogram;
  if (name == "averaged" || name == "welch") return PsdMethod::kAveragedSegment;
  throw Error(ErrorKind::kInvalidArgument, "unknown PSD method '" + std::string(name) + "'");
}

WindowFunction parse_window(std::string_view name) {
  if (name == "hann") return WindowFunction::kHann;
  if (name == "rect" || name == "rectangular") return WindowFunction::kRectangular;
  throw Error(ErrorKind::kInvalidArgument, "unknown window '" + std::string(name) + "'");
}

PsdCurve psd(const TimeSeries& series, const PsdOptions& options) {
  series.validate();
  const std::size_t m = series.size();
  PsdCurve curve;
  curve.method = options.method;
  curve.window = options.window;

  std::size_t len = m;
  std::size_t hop = m;
  std::size_t count = 1;
  if (options.method == PsdMethod::kAveragedSegment) {
    require(options.segments >= 1, ErrorKind::kInvalidArgument, "segment count must be >= 1");
    len = options.segment_length;
    if (len == 0) len = 2 * m / (options.segments + 1);
    require(len >= 2 && m >= 2 * len, ErrorKind::kInsufficientData,
            "series of " + std::to_string(m) + " samples is too short for segments of " + std::to_string(len));
    hop = len / 2;
    count = (m - len) / hop + 1;
  }
  curve.segment_length = len;

  std::vector<double> w(len, 1.0);
  if (options.window == WindowFunction::kHann)
    for (std::size_t i = 0; i < len; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(len));
  double wpower = 0.0;
  for (double v : w) wpower += v * v;

  const std::size_t bins = len / 2;
  std::vector<double> acc(bins + 1, 0.0);
  FftPlan plan(len);
  auto buf = plan.data();
  for (std::size_t s = 0; s < count; ++s) {
    const double* seg = series.samples.data() + s * hop;
    double mean = 0.0;
    for (std::size_t i = 0; i < len; ++i) mean += seg[i];
    mean /= static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) buf[i] = (seg[i] - mean) * w[i];
    plan.forward();
    for (std::size_t k = 1; k <= bins; ++k) acc[k] += std::norm(buf[k]);
  }

  const double df = 1.0 / (static_cast<double>(len) * series.dt);
  const double scale = series.dt / (wpower * static_cast<double>(count));
  curve.points.reserve(bins);
  for (std::size_t k = 1; k <= bins; ++k) {
    const bool nyquist = (len % 2 == 0) && k == bins;
    curve.points.push_back({static_cast<double>(k) * df, (nyquist ? 1.0 : 2.0) * acc[k] * scale});
  }
  return curve;
}

}  // namespace wva

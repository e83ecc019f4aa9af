#include "wva/fit.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "wva/error.hpp"

namespace wva {

SlopeFit loglog_fit(std::span<const double> x, std::span<const double> y, double lo, double hi,
                    std::size_t min_points) {
  require(x.size() == y.size(), ErrorKind::kLength, "x and y differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi || !(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    lx.push_back(std::log10(x[i]));
    ly.push_back(std::log10(y[i]));
  }
  require(lx.size() >= min_points, ErrorKind::kEmptyBand,
          "only " + std::to_string(lx.size()) + " usable points in band");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorKind::kEmptyBand, "band holds a single abscissa");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = lx.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.stderr_slope = lx.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : std::numeric_limits<double>::infinity();
  return fit;
}

SlopeFit slope_fit(const AllanCurve& curve, double lo, double hi) {
  std::vector<double> x, y;
  for (const auto& p : curve.points) {
    x.push_back(p.T);
    y.push_back(p.sigma2);
  }
  return loglog_fit(x, y, lo, hi);
}

SlopeFit slope_fit(const PsdCurve& curve, double lo, double hi) {
  std::vector<double> x, y;
  for (const auto& p : curve.points) {
    x.push_back(p.f);
    y.push_back(p.S);
  }
  return loglog_fit(x, y, lo, hi);
}

SlopeFit scaling_fit(std::span<const std::pair<double, double>> points) {
  std::vector<double> x, y;
  for (const auto& [n_r, s2] : points) {
    x.push_back(n_r);
    y.push_back(s2);
  }
  return loglog_fit(x, y, 0.0, std::numeric_limits<double>::infinity(), 3);
}

}  // namespace wva

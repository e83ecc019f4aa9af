#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wva/allan.hpp"
#include "wva/calibration.hpp"
#include "wva/error.hpp"
#include "wva/fisher.hpp"
#include "wva/fit.hpp"
#include "wva/noisegen.hpp"
#include "wva/psd.hpp"

namespace {

wva::TimeSeries gaussian_series(std::size_t n, double sigma, std::uint64_t seed, double dt = 0.01) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sigma);
  wva::TimeSeries s{std::vector<double>(n), dt, 0};
  for (double& v : s.samples) v = d(rng);
  return s;
}

template <typename Fn>
wva::ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const wva::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return wva::ErrorKind::kInvalidArgument;
}

// ---- calibration ----------------------------------------------------------

TEST(Calibration, ExactLine) {
  const std::vector<wva::CalibrationPoint> pts{{1, 2.0}, {2, 4.0}, {3, 6.0}};
  const auto line = wva::calibrate(pts);
  EXPECT_NEAR(line.slope, 2.0, 1e-14);
  EXPECT_NEAR(line.intercept, 0.0, 1e-14);
  EXPECT_NEAR(line.residual_rms, 0.0, 1e-14);
  EXPECT_EQ(line.points.size(), 3u);
}

TEST(Calibration, NoisyLineLeastSquares) {
  const std::vector<wva::CalibrationPoint> pts{{1.08, 12.0}, {1.69, 20.1}, {2.43, 28.2}};
  const auto line = wva::calibrate(pts);
  // Normal equations solved by hand.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sx += p.tau_as;
    sy += p.mean_shift;
    sxx += p.tau_as * p.tau_as;
    sxy += p.tau_as * p.mean_shift;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  EXPECT_NEAR(line.slope, slope, 1e-12);
  EXPECT_NEAR(line.intercept, (sy - slope * sx) / 3, 1e-12);
  EXPECT_GT(line.residual_rms, 0.0);
}

TEST(Calibration, Errors) {
  const std::vector<wva::CalibrationPoint> one{{1.69, 2.0}, {1.69, 2.1}};
  EXPECT_EQ(kind_of([&] { (void)wva::calibrate(one); }), wva::ErrorKind::kUnderdeterminedFit);
  const wva::CalibrationLine flat{0.0, 1.0, 0.0, {}};
  EXPECT_EQ(kind_of([&] { (void)wva::estimate_tau(1.0, flat); }), wva::ErrorKind::kDegenerateCalibration);
}

TEST(EstimateTau, Examples) {
  const wva::CalibrationLine published{11.75, 0.0, 0.0, {}};
  EXPECT_NEAR(wva::estimate_tau(19.86, published), 1.69, 0.005);
  EXPECT_EQ(wva::estimate_tau(0.0, published), 0.0);
  const wva::CalibrationLine line{0.54, -0.2, 0.0, {}};
  for (double tau : {-3.0, 0.0, 1.08, 6.7}) EXPECT_NEAR(wva::estimate_tau(line.slope * tau + line.intercept, line), tau, 1e-13);
}

TEST(Calibration, JsonRoundTrip) {
  const std::vector<wva::CalibrationPoint> pts{{1.08, 12.0}, {1.69, 20.1}, {2.43, 28.2}};
  const auto line = wva::calibrate(pts);
  const auto text = wva::to_json(line, "00ff00ff00ff00ff", 42, true);
  EXPECT_NE(text.find("\"slope\""), std::string::npos);
  EXPECT_NE(text.find("00ff00ff00ff00ff"), std::string::npos);
  const auto back = wva::calibration_from_json(text);
  EXPECT_EQ(back.slope, line.slope);
  EXPECT_EQ(back.intercept, line.intercept);
  EXPECT_EQ(back.residual_rms, line.residual_rms);
  ASSERT_EQ(back.points.size(), 3u);
  EXPECT_EQ(back.points[1].mean_shift, 20.1);
  EXPECT_THROW((void)wva::calibration_from_json("{\"points\": []}"), wva::Error);
}

// ---- Allan ----------------------------------------------------------------

TEST(Allan, ConstantIsZero) {
  const wva::TimeSeries s{std::vector<double>(100, 3.5), 0.01, 0};
  for (std::size_t n : {1, 5, 50}) EXPECT_EQ(wva::allan_variance(s, n).sigma2, 0.0);
  for (const auto& p : wva::allan_curve(s).points) EXPECT_EQ(p.sigma2, 0.0);
}

TEST(Allan, AlternatingHandComputed) {
  wva::TimeSeries s{std::vector<double>(101), 0.01, 0};
  for (std::size_t i = 0; i < s.size(); ++i) s.samples[i] = (i % 2 == 0) ? 0.3 : -0.3;
  const auto r = wva::allan_variance(s, 1);
  EXPECT_NEAR(r.sigma2, 2.0 * 0.09, 1e-15);
  EXPECT_EQ(r.windows_used, 100u);
}

TEST(Allan, BruteForceDefinition) {
  const auto s = gaussian_series(97, 1.0, 3);
  for (std::size_t n : {1, 2, 5, 13, 48}) {
    const std::size_t windows = s.size() - 2 * n + 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < windows; ++k) {
      double a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        a += s.samples[k + j];
        b += s.samples[k + n + j];
      }
      acc += (b / n - a / n) * (b / n - a / n);
    }
    const auto r = wva::allan_variance(s, n);
    EXPECT_NEAR(r.sigma2, acc / (2.0 * windows), 1e-12) << n;
    EXPECT_EQ(r.windows_used, windows);

    double adj = 0.0;
    for (std::size_t k = 0; k < windows; ++k) {
      double a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        a += s.samples[k + j];
        b += s.samples[k + 1 + j];
      }
      adj += (b / n - a / n) * (b / n - a / n);
    }
    EXPECT_NEAR(wva::allan_variance(s, n, wva::AllanMode::kAdjacentSample).sigma2, adj / (2.0 * windows), 1e-12);
  }
}

TEST(Allan, WhiteNoiseLaw) {
  const auto s = gaussian_series(1'000'000, 1.3, 4);
  for (std::size_t n : {1, 4, 16}) EXPECT_NEAR(wva::allan_variance(s, n).sigma2, 1.69 / n, 0.05 * 1.69 / n) << n;
}

TEST(Allan, ScaleAndTranslation) {
  auto s = gaussian_series(500, 1.0, 5);
  const double base = wva::allan_variance(s, 7).sigma2;
  auto scaled = s;
  for (double& v : scaled.samples) v *= 3.0;
  EXPECT_NEAR(wva::allan_variance(scaled, 7).sigma2, 9.0 * base, 1e-12 * base);
  auto moved = s;
  for (double& v : moved.samples) v += 1e6;
  EXPECT_NEAR(wva::allan_variance(moved, 7).sigma2, base, 1e-6 * base);
}

TEST(Allan, CurveGridAndTimes) {
  const auto s = gaussian_series(1000, 1.0, 6, 0.01);
  const auto grid = wva::log_n_grid(1000);
  EXPECT_EQ(grid.front(), 1u);
  EXPECT_EQ(grid.back(), 500u);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  EXPECT_EQ(std::adjacent_find(grid.begin(), grid.end()), grid.end());
  const auto curve = wva::allan_curve(s);
  ASSERT_EQ(curve.points.size(), grid.size());
  for (const auto& p : curve.points) {
    EXPECT_DOUBLE_EQ(p.T, static_cast<double>(p.n) * 0.01);
    EXPECT_EQ(p.windows_used, 1000 - 2 * p.n + 1);
    EXPECT_GE(p.sigma2, 0.0);
  }
}

TEST(Allan, Errors) {
  const auto s = gaussian_series(10, 1.0, 7);
  EXPECT_EQ(kind_of([&] { (void)wva::allan_variance(s, 6); }), wva::ErrorKind::kInsufficientData);
  EXPECT_THROW((void)wva::allan_variance(s, 0), wva::Error);
  const std::vector<std::size_t> unsorted{4, 2};
  EXPECT_THROW((void)wva::allan_curve(s, unsorted), wva::Error);
}

class AllanSlope : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(AllanSlope, FollowsNoiseClass) {
  const auto [alpha, want] = GetParam();
  wva::Rng rng(11 + static_cast<std::uint64_t>(alpha));
  const auto s = wva::gen_powerlaw(alpha, 1 << 16, 1.0, 0.01, rng);
  const auto curve = wva::allan_curve(s);
  const auto fit = wva::slope_fit(curve, 0.02, 20.0);
  EXPECT_NEAR(fit.slope, want, alpha == 0.0 ? 0.1 : 0.15);
}

INSTANTIATE_TEST_SUITE_P(Classes, AllanSlope,
                         ::testing::Values(std::pair{0.0, -1.0}, std::pair{1.0, 0.0}, std::pair{2.0, 1.0}));

// ---- PSD ------------------------------------------------------------------

TEST(Psd, SineAtBinCentre) {
  const std::size_t n = 4096;
  const double dt = 0.01, amp = 2.0;
  const double f0 = 300.0 / (n * dt);
  wva::TimeSeries s{std::vector<double>(n), dt, 0};
  for (std::size_t i = 0; i < n; ++i) s.samples[i] = amp * std::sin(2.0 * std::numbers::pi * f0 * i * dt);
  wva::PsdOptions o;
  o.method = wva::PsdMethod::kPeriodogram;
  o.window = wva::WindowFunction::kRectangular;
  const auto p = wva::psd(s, o);
  const double df = p.points[0].f;
  double total = 0.0;
  std::size_t peak = 0;
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    total += p.points[i].S * df;
    if (p.points[i].S > p.points[peak].S) peak = i;
  }
  EXPECT_NEAR(p.points[peak].f, f0, 1e-9);
  EXPECT_NEAR(total, amp * amp / 2.0, 0.01 * amp * amp / 2.0);
  EXPECT_NEAR(p.points[peak].S * df, amp * amp / 2.0, 0.01 * amp * amp / 2.0);
}

TEST(Psd, FrequenciesAndNonNegativity) {
  const auto s = gaussian_series(1000, 1.0, 8, 0.01);
  for (auto method : {wva::PsdMethod::kPeriodogram, wva::PsdMethod::kAveragedSegment}) {
    wva::PsdOptions o;
    o.method = method;
    const auto p = wva::psd(s, o);
    double last = 0.0;
    for (const auto& pt : p.points) {
      EXPECT_GT(pt.f, last);
      EXPECT_GE(pt.S, 0.0);
      last = pt.f;
    }
    EXPECT_LE(last, 50.0 + 1e-9);
  }
}

TEST(Psd, WhiteLevel) {
  const double sigma = 0.8, fs = 100.0;
  const auto s = gaussian_series(1 << 19, sigma, 9, 1.0 / fs);
  wva::PsdOptions o;
  o.segment_length = 256;
  const auto p = wva::psd(s, o);
  const double level = sigma * sigma / (fs / 2.0);
  // Bin 1 loses power to per-segment mean removal; Nyquist is not folded.
  for (std::size_t k = 1; k + 1 < p.points.size(); ++k)
    EXPECT_NEAR(p.points[k].S, level, 0.1 * level) << p.points[k].f;
}

TEST(Psd, ParsevalRectangular) {
  const auto s = gaussian_series(1 << 14, 1.5, 10);
  wva::PsdOptions o;
  o.window = wva::WindowFunction::kRectangular;
  const auto p = wva::psd(s, o);
  const double df = p.points[0].f;
  double total = 0.0;
  for (const auto& pt : p.points) total += pt.S * df;
  double mean = 0.0, var = 0.0;
  for (double v : s.samples) mean += v;
  mean /= static_cast<double>(s.size());
  for (double v : s.samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(s.size() - 1);
  EXPECT_NEAR(total, var, 0.02 * var);
}

TEST(Psd, RandomWalkSlope) {
  wva::Rng rng(12);
  const auto s = wva::gen_powerlaw(2.0, 1 << 16, 1.0, 0.01, rng);
  wva::PsdOptions o;
  o.segments = 16;
  EXPECT_NEAR(wva::slope_fit(wva::psd(s, o), 0.05, 5.0).slope, -2.0, 0.2);
}

TEST(Psd, TooShort) {
  const auto s = gaussian_series(16, 1.0, 13);
  wva::PsdOptions o;
  o.segment_length = 12;
  EXPECT_EQ(kind_of([&] { (void)wva::psd(s, o); }), wva::ErrorKind::kInsufficientData);
  EXPECT_EQ(wva::parse_psd_method("welch"), wva::PsdMethod::kAveragedSegment);
  EXPECT_EQ(wva::parse_window("rect"), wva::WindowFunction::kRectangular);
  EXPECT_THROW((void)wva::parse_window("kaiser"), wva::Error);
}

// ---- fits -----------------------------------------------------------------

TEST(Fit, ExactPowerLaws) {
  wva::PsdCurve p;
  for (int i = 1; i <= 20; ++i) p.points.push_back({0.5 * i, std::pow(0.5 * i, -2.0)});
  EXPECT_NEAR(wva::slope_fit(p, 0.0, 100.0).slope, -2.0, 1e-12);

  std::vector<std::pair<double, double>> inv, flat;
  for (double n : {1e3, 1e4, 1e5}) {
    inv.emplace_back(n, 7.0 / n);
    flat.emplace_back(n, 0.3);
  }
  EXPECT_NEAR(wva::scaling_fit(inv).slope, -1.0, 1e-12);
  EXPECT_NEAR(wva::scaling_fit(flat).slope, 0.0, 1e-12);
}

TEST(Fit, BandSelection) {
  wva::AllanCurve c;
  for (int i = 1; i <= 30; ++i) c.points.push_back({0.1 * i, i < 15 ? 1.0 / i : static_cast<double>(i), static_cast<std::size_t>(i), 1});
  EXPECT_NEAR(wva::slope_fit(c, 0.1, 1.4).slope, -1.0, 1e-12);
  EXPECT_NEAR(wva::slope_fit(c, 1.5, 3.0).slope, 1.0, 1e-12);
  EXPECT_EQ(kind_of([&] { (void)wva::slope_fit(c, 10.0, 20.0); }), wva::ErrorKind::kEmptyBand);
  const std::vector<std::pair<double, double>> two{{1.0, 1.0}, {2.0, 0.5}};
  EXPECT_THROW((void)wva::scaling_fit(two), wva::Error);
}

// ---- Fisher ---------------------------------------------------------------

wva::RowProfile gaussian_profile(double k, double w, std::size_t rows) {
  return [=](double tau) {
    std::vector<double> p(rows);
    double sum = 0.0;
    const double mu = static_cast<double>(rows) / 2.0 + k * tau;
    for (std::size_t m = 0; m < rows; ++m) {
      const double d = static_cast<double>(m) - mu;
      p[m] = std::exp(-d * d / (2.0 * w * w));
      sum += p[m];
    }
    for (double& v : p) v /= sum;
    return p;
  };
}

TEST(Fisher, ShiftedGaussianAnalytic) {
  const double k = 2.0, w = 5.0, n_r = 3.6e4;
  const auto r = wva::fisher_information(gaussian_profile(k, w, 200), 0.3, 0.1 / k, n_r);
  EXPECT_NEAR(r.cfi, n_r * k * k / (w * w), 0.01 * n_r * k * k / (w * w));
  EXPECT_NEAR(r.crb, 1.0 / r.cfi, 1e-15);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.step_change, 0.005);
  EXPECT_FALSE(r.infinite_crb);
}

TEST(Fisher, LinearInPhotonNumber) {
  const auto prof = gaussian_profile(1.0, 3.0, 64);
  const auto a = wva::fisher_information(prof, 0.0, 0.1, 1000.0);
  const auto b = wva::fisher_information(prof, 0.0, 0.1, 2000.0);
  EXPECT_EQ(b.cfi, 2.0 * a.cfi);
}

TEST(Fisher, NoInformation) {
  const wva::RowProfile still = [](double) { return std::vector<double>(10, 0.1); };
  const auto r = wva::fisher_information(still, 1.0, 0.1, 1e4);
  EXPECT_EQ(r.cfi, 0.0);
  EXPECT_TRUE(r.infinite_crb);
  EXPECT_TRUE(std::isinf(r.crb));
}

TEST(Fisher, Errors) {
  const wva::RowProfile unnormalised = [](double) { return std::vector<double>(10, 0.2); };
  EXPECT_EQ(kind_of([&] { (void)wva::fisher_information(unnormalised, 0.0, 0.1, 1.0); }),
            wva::ErrorKind::kNormalization);
  const auto prof = gaussian_profile(1.0, 3.0, 64);
  EXPECT_THROW((void)wva::fisher_information(prof, 0.0, 0.0, 1.0), wva::Error);
  EXPECT_THROW((void)wva::fisher_information(prof, 0.0, 0.1, 0.0), wva::Error);
}

}  // namespace

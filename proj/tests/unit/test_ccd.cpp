#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wva/ccd.hpp"
#include "wva/error.hpp"

namespace {

wva::CcdSpec spec(std::size_t rows, std::size_t cols, int bits = 16) {
  wva::CcdSpec s;
  s.rows = rows;
  s.cols = cols;
  s.bit_depth = bits;
  return s;
}

wva::IntensityMap uniform(const wva::CcdSpec& s) { return wva::IntensityMap(s.grid(), 1.0); }

wva::IntensityMap gaussian_spot(const wva::CcdSpec& s, double width) {
  wva::IntensityMap m(s.grid());
  for (std::size_t r = 0; r < s.rows; ++r)
    for (std::size_t c = 0; c < s.cols; ++c) {
      const double dy = static_cast<double>(r) - static_cast<double>(s.rows) / 2.0;
      const double dx = static_cast<double>(c) - static_cast<double>(s.cols) / 2.0;
      m(r, c) = std::exp(-(dx * dx + dy * dy) / (width * width));
    }
  return m;
}

double total(const wva::Frame& f) { return std::accumulate(f.counts.begin(), f.counts.end(), 0.0); }

TEST(Expose, VanishingPhotonNumberGivesEmptyFrame) {
  const auto s = spec(16, 16);
  wva::Rng rng(1);
  const auto f = wva::expose(uniform(s), 1e-9, s, rng);
  EXPECT_EQ(total(f), 0.0);
}

TEST(Expose, UniformMeanWithinPoissonBand) {
  const auto s = spec(32, 32);
  wva::Rng rng(2);
  const double mu = 1e6 / 1024.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = wva::expose(uniform(s), 1e6, s, rng);
    EXPECT_NEAR(total(f) / 1024.0, mu, 3.0 * std::sqrt(mu) / std::sqrt(1024.0));
  }
}

TEST(Expose, PeakClipsAtSaturation) {
  auto s = spec(33, 33, 8);
  const auto img = gaussian_spot(s, 3.0);
  const double sum = std::accumulate(img.values().begin(), img.values().end(), 0.0);
  const double peak = *std::max_element(img.values().begin(), img.values().end());
  wva::Rng rng(3);
  const auto f = wva::expose(img, 1e3 * sum / peak, s, rng);
  EXPECT_EQ(*std::max_element(f.counts.begin(), f.counts.end()), 255);
  EXPECT_EQ(f(16, 16), 255);
}

// Per-pixel variance/mean over many frames, for both sampling paths.
void check_poisson(double mu_per_pixel, std::uint64_t seed) {
  const auto s = spec(4, 4);
  const wva::PhotonSampler sampler(uniform(s), mu_per_pixel * 16.0, s);
  wva::Rng rng(seed);
  const int frames = 20000;
  std::vector<double> sum(16, 0.0), sum2(16, 0.0);
  for (int i = 0; i < frames; ++i) {
    const auto f = sampler.expose(rng);
    for (std::size_t p = 0; p < 16; ++p) {
      sum[p] += f.counts[p];
      sum2[p] += static_cast<double>(f.counts[p]) * f.counts[p];
    }
  }
  for (std::size_t p = 0; p < 16; ++p) {
    const double mean = sum[p] / frames;
    const double var = sum2[p] / frames - mean * mean;
    EXPECT_NEAR(var / mean, 1.0, 0.05) << p;
    EXPECT_NEAR(mean, mu_per_pixel, 4.0 * std::sqrt(mu_per_pixel / frames));
  }
}

TEST(Expose, SparsePathIsPoisson) { check_poisson(1.0, 4); }
TEST(Expose, DensePathIsPoisson) { check_poisson(20.0, 5); }

TEST(Expose, TotalNearRequestedBudget) {
  const auto s = spec(64, 64);
  const auto img = gaussian_spot(s, 10.0);
  for (double n_r : {1e3, 3.6e4, 1e6}) {
    wva::Rng rng(static_cast<std::uint64_t>(n_r));
    const auto f = wva::expose(img, n_r, s, rng);
    EXPECT_NEAR(total(f), n_r, 4.0 * std::sqrt(n_r)) << n_r;
  }
}

TEST(Expose, IncidentModeAppliesEfficiency) {
  const auto s = spec(8, 8);
  const wva::PhotonSampler det(uniform(s), 1000.0, s, wva::PhotonBudget::kDetected);
  const wva::PhotonSampler inc(uniform(s), 1000.0, s, wva::PhotonBudget::kIncident);
  EXPECT_DOUBLE_EQ(det.expected_total(), 1000.0);
  EXPECT_DOUBLE_EQ(inc.expected_total(), 1000.0 * s.quantum_efficiency);
}

TEST(Expose, GainScalesCounts) {
  auto s = spec(8, 8);
  s.gain = 2.0;
  wva::Rng rng(6);
  const auto f = wva::expose(uniform(s), 640.0, s, rng);
  for (auto v : f.counts) EXPECT_EQ(v % 2, 0);
}

TEST(Expose, Deterministic) {
  const auto s = spec(32, 32);
  const auto img = gaussian_spot(s, 5.0);
  wva::Rng a(77), b(77);
  EXPECT_EQ(wva::expose(img, 5e3, s, a).counts, wva::expose(img, 5e3, s, b).counts);
  EXPECT_EQ(wva::expose(img, 5e5, s, a).counts, wva::expose(img, 5e5, s, b).counts);
}

TEST(Expose, Errors) {
  const auto s = spec(8, 8);
  wva::Rng rng(1);
  try {
    (void)wva::expose(wva::IntensityMap(s.grid(), 0.0), 10.0, s, rng);
    FAIL();
  } catch (const wva::Error& e) {
    EXPECT_EQ(e.kind(), wva::ErrorKind::kEmptyIntensity);
  }
  EXPECT_THROW((void)wva::expose(uniform(s), 0.0, s, rng), wva::Error);
  EXPECT_THROW((void)wva::expose(uniform(spec(4, 8)), 10.0, s, rng), wva::Error);
  auto bad = s;
  bad.bit_depth = 10;
  EXPECT_THROW((void)wva::expose(uniform(s), 10.0, bad, rng), wva::Error);
  bad = s;
  bad.quantum_efficiency = 1.5;
  EXPECT_THROW(bad.validate(), wva::Error);
}

wva::Frame frame_of(std::size_t rows, std::size_t cols, std::uint16_t fill, int bits = 8) {
  const auto s = spec(rows, cols, bits);
  return {s, {}, std::vector<std::uint16_t>(rows * cols, fill)};
}

TEST(RowMarginal, Examples) {
  EXPECT_EQ(wva::row_marginal(frame_of(4, 4, 1)), (std::vector<std::int64_t>{4, 4, 4, 4}));
  auto f = frame_of(5, 3, 0);
  f.counts[2 * 3 + 1] = 9;
  EXPECT_EQ(wva::row_marginal(f), (std::vector<std::int64_t>{0, 0, 9, 0, 0}));
}

TEST(RowMarginal, Linear) {
  const auto s = spec(16, 8);
  wva::Rng rng(9);
  const auto a = wva::expose(uniform(s), 500.0, s, rng);
  const auto b = wva::expose(uniform(s), 500.0, s, rng);
  wva::Frame sum = a;
  for (std::size_t i = 0; i < sum.counts.size(); ++i) sum.counts[i] = a.counts[i] + b.counts[i];
  const auto ka = wva::row_marginal(a), kb = wva::row_marginal(b), ks = wva::row_marginal(sum);
  for (std::size_t r = 0; r < ks.size(); ++r) EXPECT_EQ(ks[r], ka[r] + kb[r]);
}

TEST(Saturation, Examples) {
  EXPECT_EQ(wva::saturation_fraction(frame_of(4, 4, 0)), 0.0);
  EXPECT_EQ(wva::saturation_fraction(frame_of(4, 4, 255)), 1.0);
  EXPECT_EQ(wva::saturation_fraction(frame_of(4, 4, 4095, 12)), 1.0);
  const auto s = spec(64, 64, 8);
  wva::Rng rng(10);
  const auto f = wva::expose(uniform(s), 127.0 * 4096.0, s, rng);
  EXPECT_LT(wva::saturation_fraction(f), 1e-3);
}

TEST(Saturation, NonDecreasingInPhotonNumber) {
  const auto s = spec(64, 64, 8);
  const auto img = gaussian_spot(s, 12.0);
  double last = -1.0;
  for (double n_r : {1e4, 1e5, 1e6, 3e6, 1e7}) {
    wva::Rng rng(11);
    const double frac = wva::saturation_fraction(wva::expose(img, n_r, s, rng));
    EXPECT_GE(frac, last) << n_r;
    last = frac;
  }
  EXPECT_GT(last, 0.1);
}

TEST(ToImage, CopiesCounts) {
  auto f = frame_of(3, 2, 7);
  f.counts[5] = 100;
  const auto img = wva::to_image(f);
  EXPECT_EQ(img(2, 1), 100.0);
  EXPECT_EQ(img(0, 0), 7.0);
}

}  // namespace

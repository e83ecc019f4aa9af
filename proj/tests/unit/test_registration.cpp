#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wva/error.hpp"
#include "wva/registration.hpp"

namespace {

using wva::GridSpec;
using wva::IntensityMap;

// Periodic band-limited pattern evaluated at a continuous displacement:
// the exact circularly shifted image, with no resampling involved.
IntensityMap fringes(std::size_t rows, std::size_t cols, double dy, double dx) {
  IntensityMap m(GridSpec{rows, cols, 1.0});
  const struct {
    double a, ky, kx, phase;
  } terms[] = {{1.0, 1, 0, 0.3}, {0.6, 3, 1, 1.1}, {0.35, 5, -2, -0.4}, {0.2, 2, 3, 2.0}, {0.1, 7, 0, 0.9}};
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 3.0;
      for (const auto& t : terms)
        v += t.a * std::cos(2.0 * std::numbers::pi *
                                (t.ky * (static_cast<double>(r) - dy) / static_cast<double>(rows) +
                                 t.kx * (static_cast<double>(c) - dx) / static_cast<double>(cols)) +
                            t.phase);
      m(r, c) = v;
    }
  return m;
}

// Smooth, non-periodic spot used for the weighting checks.
IntensityMap spot(std::size_t rows, std::size_t cols, double dy, double dx) {
  IntensityMap m(GridSpec{rows, cols, 1.0});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double y = static_cast<double>(r) - static_cast<double>(rows) / 2.0 - dy;
      const double x = static_cast<double>(c) - static_cast<double>(cols) / 2.0 - dx;
      m(r, c) = std::exp(-(x * x) / 40.0 - (y * y) / 60.0) * (1.0 + 0.5 * std::cos(0.8 * y));
    }
  return m;
}

wva::RegistrationOptions kappa(int k, wva::Weighting w = wva::Weighting::kLinear) {
  wva::RegistrationOptions o;
  o.upsample = k;
  o.weighting = w;
  return o;
}

wva::Frame to_frame(const IntensityMap& m, double scale, std::uint64_t index = 0) {
  wva::CcdSpec s;
  s.rows = m.rows();
  s.cols = m.cols();
  s.bit_depth = 16;
  wva::Frame f{s, {index, 0.01 * static_cast<double>(index), index}, std::vector<std::uint16_t>(m.values().size())};
  for (std::size_t i = 0; i < f.counts.size(); ++i) f.counts[i] = static_cast<std::uint16_t>(std::lround(m.values()[i] * scale));
  return f;
}

TEST(Register, SelfIsZero) {
  const auto a = fringes(64, 48, 0.0, 0.0);
  const auto e = wva::register_images(a, a, kappa(100));
  EXPECT_EQ(e.dy, 0.0);
  EXPECT_EQ(e.dx, 0.0);
  EXPECT_NEAR(e.peak_value, 1.0, 1e-12);
  EXPECT_EQ(e.upsample, 100);
}

TEST(Register, IntegerCircularShift) {
  const auto a = fringes(64, 48, 0.0, 0.0);
  IntensityMap b(a.spec());
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 48; ++c) b((r + 3) % 64, (c + 48 - 2) % 48) = a(r, c);
  for (int k : {1, 100}) {
    const auto e = wva::register_images(a, b, kappa(k));
    EXPECT_NEAR(e.dy, 3.0, 1e-12);
    EXPECT_NEAR(e.dx, -2.0, 1e-12);
  }
}

TEST(Register, QuarterPixel) {
  const auto e = wva::register_images(fringes(64, 64, 0, 0), fringes(64, 64, 0.25, 0.0), kappa(100));
  EXPECT_NEAR(e.dy, 0.25, 0.01);
  EXPECT_NEAR(e.dx, 0.0, 0.01);
}

TEST(Register, SubpixelWithinQuantumOverRange) {
  const auto ref = fringes(64, 32, 0, 0);
  const wva::Registrar reg(ref, kappa(100));
  for (double dy = -5.0; dy <= 5.0; dy += 0.437)
    for (double dx : {-1.3, 0.0, 0.71}) {
      const auto e = reg.estimate(fringes(64, 32, dy, dx));
      EXPECT_LE(std::abs(e.dy - dy), 0.01) << dy;
      EXPECT_LE(std::abs(e.dx - dx), 0.01) << dx;
    }
}

TEST(Register, OddExtentAndSingleColumn) {
  const auto e = wva::register_images(fringes(63, 31, 0, 0), fringes(63, 31, -0.62, 0.4), kappa(50));
  EXPECT_NEAR(e.dy, -0.62, 0.02);
  EXPECT_NEAR(e.dx, 0.4, 0.02);
  const auto c = wva::register_images(fringes(128, 1, 0, 0), fringes(128, 1, 1.234, 0), kappa(1000));
  EXPECT_NEAR(c.dy, 1.234, 1e-3);
  EXPECT_EQ(c.dx, 0.0);
}

TEST(Register, Antisymmetric) {
  const auto a = spot(64, 64, 0.0, 0.0), b = spot(64, 64, 0.37, -0.21);
  const auto ab = wva::register_images(a, b, kappa(100));
  const auto ba = wva::register_images(b, a, kappa(100));
  EXPECT_NEAR(ab.dy, -ba.dy, 0.01);
  EXPECT_NEAR(ab.dx, -ba.dx, 0.01);
}

TEST(Register, WeightedReferences) {
  for (auto w : {wva::Weighting::kSqrt, wva::Weighting::kLogFloor}) {
    const auto e = wva::register_images(spot(96, 64, 0, 0), spot(96, 64, 0.43, 0.2), kappa(100, w));
    EXPECT_NEAR(e.dy, 0.43, 0.02) << wva::to_string(w);
    EXPECT_NEAR(e.dx, 0.2, 0.02) << wva::to_string(w);
  }
}

TEST(Register, Errors) {
  try {
    (void)wva::register_images(fringes(32, 32, 0, 0), fringes(32, 16, 0, 0));
    FAIL();
  } catch (const wva::Error& e) {
    EXPECT_EQ(e.kind(), wva::ErrorKind::kShape);
  }
  const IntensityMap flat(GridSpec{16, 16, 1.0}, 5.0);
  try {
    (void)wva::register_images(fringes(16, 16, 0, 0), flat);
    FAIL();
  } catch (const wva::Error& e) {
    EXPECT_EQ(e.kind(), wva::ErrorKind::kNoPeak);
  }
  EXPECT_THROW((void)wva::register_images(flat, fringes(16, 16, 0, 0)), wva::Error);
  EXPECT_THROW((void)wva::register_images(fringes(16, 16, 0, 0), fringes(16, 16, 0, 0), kappa(0)), wva::Error);
}

TEST(Register, NamesRoundTrip) {
  for (auto w : {wva::Weighting::kLinear, wva::Weighting::kSqrt, wva::Weighting::kLogFloor})
    EXPECT_EQ(wva::parse_weighting(wva::to_string(w)), w);
  for (auto p : {wva::ReferencePolicy::kFirst, wva::ReferencePolicy::kMean, wva::ReferencePolicy::kExternal})
    EXPECT_EQ(wva::parse_reference_policy(wva::to_string(p)), p);
  EXPECT_THROW((void)wva::parse_weighting("cubic"), wva::Error);
}

TEST(Register, FrameOverloadAndMask) {
  const auto a = to_frame(spot(64, 64, 0, 0), 4e4);
  const auto b = to_frame(spot(64, 64, 0.3, 0), 4e4);
  EXPECT_NEAR(wva::register_frames(a, b, kappa(100)).dy, 0.3, 0.01);
  auto sat = b;
  for (auto& v : sat.counts) v = std::min<std::uint16_t>(v, 30000);
  auto opt = kappa(100);
  opt.mask_saturated = true;
  sat.spec.bit_depth = 16;
  const auto e = wva::Registrar(wva::to_image(a), opt).estimate(sat);
  EXPECT_TRUE(std::isfinite(e.dy));
  EXPECT_GE(e.peak_value, 0.0);
  EXPECT_LE(e.peak_value, 1.0);
}

TEST(ShiftSeries, IdenticalFramesGiveZeros) {
  const auto f = to_frame(spot(48, 32, 0, 0), 1e4);
  std::vector<wva::Frame> frames(5, f);
  for (std::size_t i = 0; i < frames.size(); ++i) frames[i].meta = {i, 0.01 * static_cast<double>(i), i};
  for (auto policy : {wva::ReferencePolicy::kFirst, wva::ReferencePolicy::kMean}) {
    const auto s = wva::shift_series(frames, policy, kappa(100));
    for (double v : s.dy.samples) EXPECT_EQ(v, 0.0);
    EXPECT_DOUBLE_EQ(s.dy.dt, 0.01);
  }
}

TEST(ShiftSeries, RecoversRamp) {
  std::vector<wva::Frame> frames;
  for (std::size_t i = 0; i < 3; ++i) frames.push_back(to_frame(spot(64, 64, 0.1 * static_cast<double>(i), 0), 3e4, i));
  const auto s = wva::shift_series(frames, wva::ReferencePolicy::kFirst, kappa(100));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(s.dy.samples[i] - 0.1 * static_cast<double>(i)), 0.011);

  const auto m = wva::shift_series(frames, wva::ReferencePolicy::kMean, kappa(100));
  EXPECT_NEAR(m.dy.samples[1], 0.0, 0.011);
  EXPECT_NEAR(m.dy.samples[2] - m.dy.samples[0], 0.2 * 1.5, 0.03);

  const auto model = spot(64, 64, 0, 0);
  const auto x = wva::shift_series(frames, wva::ReferencePolicy::kExternal, kappa(100), &model);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(x.dy.samples[i] - 0.1 * static_cast<double>(i)), 0.011);
  EXPECT_THROW((void)wva::shift_series(frames, wva::ReferencePolicy::kExternal, kappa(100)), wva::Error);
}

TEST(ShiftSeries, ReversedOrderNegates) {
  const auto a = to_frame(spot(64, 64, 0, 0), 3e4, 0);
  const auto b = to_frame(spot(64, 64, 0.64, 0), 3e4, 1);
  const std::vector<wva::Frame> fwd{a, b}, rev{b, a};
  const auto f = wva::shift_series(fwd, wva::ReferencePolicy::kFirst, kappa(100));
  const auto r = wva::shift_series(rev, wva::ReferencePolicy::kFirst, kappa(100));
  EXPECT_NEAR(f.dy.samples[1], -r.dy.samples[1], 0.01);
}

TEST(ShiftSeries, ScheduleIndependent) {
  std::vector<wva::Frame> frames;
  for (std::size_t i = 0; i < 16; ++i)
    frames.push_back(to_frame(spot(48, 48, 0.05 * static_cast<double>(i), 0), 2e3, i));
  auto one = kappa(100), many = kappa(100);
  one.workers = 1;
  many.workers = 8;
  EXPECT_EQ(wva::shift_series(frames, wva::ReferencePolicy::kMean, one).dy.samples,
            wva::shift_series(frames, wva::ReferencePolicy::kMean, many).dy.samples);
  EXPECT_THROW((void)wva::shift_series(std::span(frames).first(1), wva::ReferencePolicy::kFirst, one), wva::Error);
}

}  // namespace

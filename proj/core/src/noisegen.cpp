#include "wva/noisegen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wva/error.hpp"
#include "wva/fft.hpp"

namespace wva {

std::string_view to_string(NoiseChannel channel) noexcept {
  return channel == NoiseChannel::kDelayOffset ? "delay_offset" : "fringe_offset";
}

NoiseChannel parse_noise_channel(std::string_view name) {
  if (name == "delay_offset") return NoiseChannel::kDelayOffset;
  if (name == "fringe_offset") return NoiseChannel::kFringeOffset;
  throw Error(ErrorKind::kInvalidArgument, "unknown noise channel '" + std::string(name) + "'");
}

void NoiseBudget::validate() const {
  require(white_sigma >= 0.0 && flicker_amp >= 0.0 && rw_amp >= 0.0, ErrorKind::kInvalidArgument,
          "noise amplitudes must be >= 0");
}

TimeSeries gen_powerlaw(double alpha, std::size_t length, double amp, double dt, Rng& rng) {
  require(alpha >= 0.0 && alpha <= 2.0, ErrorKind::kUnsupportedExponent, "spectral exponent must lie in [0, 2]");
  require(length >= 64, ErrorKind::kInvalidArgument, "power-law series needs at least 64 samples");
  require(amp >= 0.0, ErrorKind::kInvalidArgument, "amplitude must be >= 0");
  require(dt > 0.0, ErrorKind::kInvalidArgument, "sampling period must be positive");

  TimeSeries out{std::vector<double>(length, 0.0), dt, 0};
  if (amp == 0.0) return out;

  FftPlan plan(length);
  auto buf = plan.data();
  std::normal_distribution<double> normal;
  for (auto& z : buf) z = normal(rng);
  plan.forward();

  const double n = static_cast<double>(length);
  const double df = 1.0 / (n * dt);
  buf[0] = 0.0;
  for (std::size_t k = 1; k < length; ++k) {
    const std::size_t kk = k <= length / 2 ? k : length - k;
    const double f = static_cast<double>(kk) * df;
    buf[k] *= std::sqrt(amp * std::pow(f, -alpha) / (2.0 * dt));
  }
  plan.inverse();
  for (std::size_t i = 0; i < length; ++i) out.samples[i] = buf[i].real() / n;
  return out;
}

TimeSeries synthesize(const NoiseBudget& budget, std::size_t length, double dt, std::uint64_t seed) {
  budget.validate();
  TimeSeries total{std::vector<double>(length, 0.0), dt, 0};
  const struct {
    double alpha;
    double amp;
  } parts[] = {
      {0.0, 2.0 * dt * budget.white_sigma * budget.white_sigma},
      {1.0, budget.flicker_amp},
      {2.0, budget.rw_amp},
  };
  // Take the head of a realization four times longer: one full period of a
  // circular process has no variance at the record length.
  const std::size_t gen_length = std::max<std::size_t>(64, 4 * length);
  for (std::size_t p = 0; p < 3; ++p) {
    if (parts[p].amp == 0.0) continue;
    Rng rng = make_stream(seed, StreamBlock::kNoise, p);
    const auto s = gen_powerlaw(parts[p].alpha, gen_length, parts[p].amp, dt, rng);
    for (std::size_t i = 0; i < length; ++i) total.samples[i] += s.samples[i];
  }
  return total;
}

std::vector<double> inject(double base, const TimeSeries& drift, std::size_t frames) {
  require(drift.size() == frames, ErrorKind::kLength,
          "drift has " + std::to_string(drift.size()) + " samples for " + std::to_string(frames) + " frames");
  std::vector<double> out(frames);
  for (std::size_t i = 0; i < frames; ++i) out[i] = base + drift.samples[i];
  return out;
}

}  // namespace wva

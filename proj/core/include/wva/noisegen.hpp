#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "wva/rng.hpp"
#include "wva/timeseries.hpp"

namespace wva {

enum class NoiseChannel {
  kDelayOffset,   // added to the true delay before exposure (s)
  kFringeOffset,  // added to the registered shift after the fact (pixels)
};

std::string_view to_string(NoiseChannel channel) noexcept;
NoiseChannel parse_noise_channel(std::string_view name);

/// Phenomenological technical noise. white_sigma is a standard deviation in
/// channel units; flicker_amp and rw_amp are one-sided PSD levels at 1 Hz
/// in channel units squared per Hz.
struct NoiseBudget {
  double white_sigma = 0.0;
  double flicker_amp = 0.0;
  double rw_amp = 0.0;
  NoiseChannel channel = NoiseChannel::kDelayOffset;

  [[nodiscard]] bool silent() const noexcept { return white_sigma == 0.0 && flicker_amp == 0.0 && rw_amp == 0.0; }
  void validate() const;
};

/// Power-law noise by spectral shaping: white Gaussian noise is transformed,
/// bin k scaled so the one-sided PSD is amp * f^-alpha, DC zeroed, and
/// transformed back. The result is one period of a circular process.
TimeSeries gen_powerlaw(double alpha, std::size_t length, double amp, double dt, Rng& rng);

/// Sum of the budget's three components, each from its own substream of
/// (seed, StreamBlock::kNoise). Each component is the head of a realization
/// four times the requested length.
TimeSeries synthesize(const NoiseBudget& budget, std::size_t length, double dt, std::uint64_t seed);

/// Per-frame effective parameter base + drift_i. LengthError when the drift
/// does not have one sample per frame.
std::vector<double> inject(double base, const TimeSeries& drift, std::size_t frames);

}  // namespace wva

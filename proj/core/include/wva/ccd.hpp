#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wva/grid.hpp"
#include "wva/rng.hpp"

namespace wva {

struct CcdSpec {
  double pixel_pitch = 1.85e-6;  // m
  std::size_t rows = 1024;
  std::size_t cols = 1024;
  int bit_depth = 8;
  double quantum_efficiency = 0.856;
  double gain = 1.0;  // ADU per photoelectron

  [[nodiscard]] std::uint32_t saturation() const noexcept { return (1u << bit_depth) - 1u; }
  [[nodiscard]] GridSpec grid() const noexcept { return {rows, cols, pixel_pitch}; }
  void validate() const;
};

/// How the requested photon number is interpreted. kDetected means n_r is
/// already the post-efficiency count; kIncident scales it by the quantum
/// efficiency first.
enum class PhotonBudget { kDetected, kIncident };

struct FrameMeta {
  std::uint64_t index = 0;
  double timestamp = 0.0;  // s
  std::uint64_t stream = 0;
};

/// One exposure: integer ADU counts, row-major, clipped to the bit depth.
struct Frame {
  CcdSpec spec;
  FrameMeta meta;
  std::vector<std::uint16_t> counts;

  [[nodiscard]] std::size_t rows() const noexcept { return spec.rows; }
  [[nodiscard]] std::size_t cols() const noexcept { return spec.cols; }
  [[nodiscard]] std::uint16_t operator()(std::size_t r, std::size_t c) const noexcept {
    return counts[r * spec.cols + c];
  }
};

/// Precomputes the per-pixel mean photon numbers for one intensity map so
/// repeated exposures only pay for sampling.
///
/// Sparse exposures (fewer photons than 4x the pixel count) draw the total
/// from Poisson(n_r) and scatter photons by inverse-CDF lookup; dense ones
/// draw each pixel from Poisson(mu). Both produce independent per-pixel
/// Poisson counts.
class PhotonSampler {
 public:
  PhotonSampler(const IntensityMap& intensity, double n_r, const CcdSpec& spec,
                PhotonBudget budget = PhotonBudget::kDetected);

  [[nodiscard]] Frame expose(Rng& rng, FrameMeta meta = {}) const;

  [[nodiscard]] std::span<const double> mean_counts() const noexcept { return mean_; }
  [[nodiscard]] double expected_total() const noexcept { return total_; }
  [[nodiscard]] const CcdSpec& spec() const noexcept { return spec_; }

 private:
  CcdSpec spec_;
  double total_ = 0.0;
  bool sparse_ = true;
  std::vector<double> mean_;
  // Alias table over pixels for the sparse path.
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

Frame expose(const IntensityMap& intensity, double n_r, const CcdSpec& spec, Rng& rng,
             PhotonBudget budget = PhotonBudget::kDetected);

/// K_m = sum over columns of row m.
std::vector<std::int64_t> row_marginal(const Frame& frame);

/// Fraction of pixels sitting at the saturation level.
double saturation_fraction(const Frame& frame);

/// Frame counts as a real image on the detector grid.
IntensityMap to_image(const Frame& frame);

}  // namespace wva

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wva/ccd.hpp"
#include "wva/grid.hpp"
#include "wva/timeseries.hpp"

namespace wva {

/// Transform applied to the reference image before correlation. kLogFloor
/// correlates against log(ref + floor * max(ref)), which for a smooth
/// reference approaches the Poisson maximum-likelihood shift.
enum class Weighting { kLinear, kSqrt, kLogFloor };

std::string_view to_string(Weighting w) noexcept;
Weighting parse_weighting(std::string_view name);

struct RegistrationOptions {
  int upsample = 100;  // kappa
  Weighting weighting = Weighting::kLinear;
  double log_floor = 0.03;
  /// Replace saturated pixels of the moving frame by its mean before
  /// correlating (frame overloads only).
  bool mask_saturated = false;
  std::size_t workers = 0;  // shift_series fan-out, 0 = all cores

  void validate() const;
};

/// Translation of `moving` relative to `reference`, in pixels.
struct ShiftEstimate {
  double dy = 0.0;  // rows, fringe axis
  double dx = 0.0;  // columns
  double peak_value = 0.0;
  int upsample = 1;
};

/// Holds the transformed reference spectrum so many frames can be
/// registered against one reference. Thread-safe for concurrent estimate().
class Registrar {
 public:
  Registrar(const IntensityMap& reference, const RegistrationOptions& options = {});

  [[nodiscard]] ShiftEstimate estimate(const IntensityMap& moving) const;
  [[nodiscard]] ShiftEstimate estimate(const Frame& moving) const;

  [[nodiscard]] const RegistrationOptions& options() const noexcept { return options_; }

 private:
  RegistrationOptions options_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::complex<double>> ref_conj_;  // conj(FFT(weighted ref - mean))
  double ref_energy_ = 0.0;
  // Upsampling DFT kernels for the fractional patch offsets, row-major patch x n.
  std::vector<std::complex<double>> patch_y_;
  std::vector<std::complex<double>> patch_x_;
};

/// Two-stage estimate: integer peak of the FFT cross-correlation, then the
/// correlation on a 1.5 x 1.5 pixel patch sampled every 1/kappa pixel by a
/// matrix-multiply DFT. ShapeError on extent mismatch, NoPeak on constant
/// input.
ShiftEstimate register_images(const IntensityMap& reference, const IntensityMap& moving,
                              const RegistrationOptions& options = {});
ShiftEstimate register_frames(const Frame& reference, const Frame& moving, const RegistrationOptions& options = {});

enum class ReferencePolicy {
  kFirst,     // frame 0
  kMean,      // mean of all other frames (leave-one-out)
  kExternal,  // caller-supplied image, e.g. the noiseless expected intensity
};

std::string_view to_string(ReferencePolicy p) noexcept;
ReferencePolicy parse_reference_policy(std::string_view name);

struct ShiftSeries {
  TimeSeries dy;  // pixels
  std::vector<ShiftEstimate> estimates;
};

/// Fringe-axis shift of every frame relative to the chosen reference.
/// Sampling period comes from the first two timestamps (1 s if absent).
ShiftSeries shift_series(std::span<const Frame> frames, ReferencePolicy policy, const RegistrationOptions& options,
                         const IntensityMap* external = nullptr);

}  // namespace wva

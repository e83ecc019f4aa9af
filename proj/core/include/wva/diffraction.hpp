#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include "wva/grid.hpp"
#include "wva/polarization.hpp"

namespace wva {

/// Pointer-side optics. Lengths in metres.
struct OpticalGeometry {
  double wavelength = 632.992e-9;
  double sigma_xy = 0.325e-3;  // Gaussian 1/e field radius at the lens
  double d1 = 0.425e-3;        // gap between the two half-beams
  double f_d = 1.0;            // far-field lens focal length

  /// Effective waist in the detection plane, lambda f_d / (pi sigma_xy).
  [[nodiscard]] double sigma_prime() const noexcept;
  /// d1 < sqrt(lambda f_d).
  [[nodiscard]] bool narrow_slit_valid() const noexcept;
  void validate() const;
};

enum class Arm { kUpper, kLower };

enum class Propagation {
  kClosedForm,  // analytic far field of the half-plane-masked Gaussian
  kNumeric,     // direct quadrature of the Fourier-kernel integral
};

/// Lens-plane grid whose pitch puts a node exactly on y = +-d1/2 and whose
/// half-extent is at least `coverage` beam radii.
GridSpec lens_grid(const OpticalGeometry& geometry, std::size_t nodes = 512, double coverage = 5.0);

/// Upper and lower lens-plane fields: the Gaussian envelope masked by
/// H(y - d1/2) and H(-d1/2 - y). Nodes exactly on an edge get weight 1/2.
std::pair<ComplexFieldGrid, ComplexFieldGrid> slit_fields(const OpticalGeometry& geometry,
                                                          const GridSpec& grid);

/// (i / lambda f_d) * sum exp[i 2pi/(lambda f_d) (x1 x2 + y1 y2)] U(x1, y1) dx1 dy1,
/// evaluated as two dense matrix products.
ComplexFieldGrid propagate_numeric(const ComplexFieldGrid& field, const OpticalGeometry& geometry,
                                   const GridSpec& out);

/// Analytic far field of one arm at a single detector point. With
/// u = +-y/sigma' and a = d1/(2 sigma_xy) this is
///   (i/lambda f_d) * pi sigma^2 / 2 * exp(-x^2/sigma'^2) * exp(-u^2) erfc(a - i u),
/// which for d1 -> 0 has amplitude (sigma/2sigma') e^{-r^2/sigma'^2} sqrt(1 + erfi(u)^2)
/// and phase pi/2 +- atan(erfi(u)).
std::complex<double> closed_form_field(const OpticalGeometry& geometry, Arm arm, double x2, double y2);

/// Closed-form far field of one arm on the output grid. Requires the
/// narrow-slit condition (ApproximationDomainError otherwise).
ComplexFieldGrid propagate_closed_form(const OpticalGeometry& geometry, Arm arm, const GridSpec& out);

struct AmplitudePhase {
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Amplitude/phase from the commonly quoted erf-based expressions
///   |U| = (1/2)(sigma/sigma') exp[-(x^2+y^2)/sigma^2] sqrt(1 + (4/pi) s'^2 F(s')^2),
///   phi = pi/2 +- atan[(2/sqrt(pi)) s' F(s')],  s' = y/sigma',  F = hyp1f1_half.
/// These do not solve the diffraction integral (the 1F1 argument sign is
/// flipped and the gap is ignored); kept for comparison against the exact
/// forms above.
AmplitudePhase erf_form(const OpticalGeometry& geometry, Arm arm, double x2, double y2);

/// Detector-plane fields of both arms for one geometry/grid. Independent of
/// the delay, so it is computed once and reused for every exposure.
struct ArmFields {
  ComplexFieldGrid upper;
  ComplexFieldGrid lower;
};

ArmFields compute_arm_fields(const OpticalGeometry& geometry, const GridSpec& out,
                             Propagation path = Propagation::kClosedForm,
                             std::size_t lens_nodes = 512);

/// |U_u e^{i w A_u tau}/|A_u| + U_d e^{i w A_d tau}/|A_d||^2.
IntensityMap interference_intensity(const ArmFields& fields, const SelectionConfig& selection,
                                    double tau, double omega);

IntensityMap interference_intensity(const OpticalGeometry& geometry, const SelectionConfig& selection,
                                    double tau, const GridSpec& out,
                                    Propagation path = Propagation::kClosedForm);

}  // namespace wva

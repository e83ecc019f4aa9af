#include "wva/polarization.hpp"

#include <cmath>
#include <string>

#include "wva/error.hpp"
#include "wva/units.hpp"

namespace wva {
namespace {

using cplx = std::complex<double>;

struct Jones {
  cplx h;
  cplx v;
};

Jones preselected() {
  const double a = SelectionConfig::kPreselectAngle;
  return {std::sin(a), std::cos(a)};
}

Jones postselected(double beta, double omega_tau) {
  const double angle = 3.0 * std::numbers::pi / 4.0 + beta;
  const cplx lead = std::polar(1.0, -omega_tau / 2.0);
  const cplx lag = std::polar(1.0, +omega_tau / 2.0);
  return {lead * std::sin(angle), lag * std::cos(angle)};
}

void check_beta(double beta) {
  require(std::isfinite(beta), ErrorKind::kInvalidArgument, "post-selection angle must be finite");
  require(std::abs(beta) <= std::numbers::pi / 2.0 + 1e-15, ErrorKind::kInvalidArgument,
          "post-selection angle must satisfy |beta| <= pi/2, got " + std::to_string(beta));
  require(beta != 0.0, ErrorKind::kDivergentWeakValue,
          "beta = 0 makes the post-selection orthogonal to the pre-selection");
}

}  // namespace

void SelectionConfig::validate() const {
  check_beta(beta_u);
  check_beta(beta_d);
}

double weak_value(double beta) {
  check_beta(beta);
  // cos via the complementary angle keeps cot(pi/4) at exactly 1; working
  // on |beta| makes the antisymmetry exact.
  const double b = std::abs(beta);
  return -std::copysign(std::sin(std::numbers::pi / 2.0 - b) / std::sin(b), beta);
}

WeakValuePair weak_values(const SelectionConfig& selection) {
  selection.validate();
  return {weak_value(selection.beta_u), weak_value(selection.beta_d)};
}

cplx weak_value_at_phase(double beta, double omega_tau) {
  check_beta(beta);
  const Jones in = preselected();
  const Jones out = postselected(beta, omega_tau);
  // A = diag(+1, -1) in the (H, V) basis.
  const cplx numerator = std::conj(out.h) * in.h - std::conj(out.v) * in.v;
  const cplx overlap = std::conj(out.h) * in.h + std::conj(out.v) * in.v;
  require(std::abs(overlap) > 0.0, ErrorKind::kDivergentWeakValue, "vanishing pre/post overlap");
  return numerator / overlap;
}

double tilt_to_delay(double theta, double n0, double wavelength) {
  require(std::isfinite(theta) && theta >= 0.0, ErrorKind::kInvalidArgument,
          "tilt angle must be finite and non-negative");
  require(wavelength > 0.0, ErrorKind::kInvalidArgument, "wavelength must be positive");
  require(n0 > 1.0, ErrorKind::kInvalidArgument, "refractive index must exceed 1");
  const double omega = angular_frequency(wavelength);
  return std::numbers::pi * theta * theta / (2.0 * n0 * n0 * omega);
}

DelaySetting make_delay_setting(double theta, double n0, double wavelength) {
  return {theta, n0, angular_frequency(wavelength), tilt_to_delay(theta, n0, wavelength)};
}

double postselection_probability(double beta, double tau, double omega) {
  require(std::isfinite(beta) && std::abs(beta) <= std::numbers::pi / 2.0 + 1e-15,
          ErrorKind::kInvalidArgument, "post-selection angle out of range");
  const Jones in = preselected();
  const Jones out = postselected(beta, omega * tau);
  const cplx overlap = std::conj(out.h) * in.h + std::conj(out.v) * in.v;
  return std::norm(overlap);
}

}  // namespace wva

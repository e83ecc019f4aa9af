#pragma once

#include <complex>
#include <numbers>

namespace wva {

/// Pre/post-selection angles of the two-arm measurement. The pre-selection
/// is fixed at pi/4 (equal H/V superposition); each arm is post-selected at
/// 3pi/4 + beta. Angles are radians.
struct SelectionConfig {
  static constexpr double kPreselectAngle = std::numbers::pi / 4.0;

  double beta_u = 0.0;
  double beta_d = 0.0;

  /// Throws InvalidArgument / DivergentWeakValue when an angle is out of
  /// range or zero.
  void validate() const;
};

struct WeakValuePair {
  double a_w_u = 0.0;
  double a_w_d = 0.0;
};

/// Waveplate tilt and the birefringent delay it produces.
struct DelaySetting {
  double theta = 0.0;  // rad
  double n0 = 1.54;
  double omega = 0.0;  // rad/s
  double tau = 0.0;    // s
};

/// Real weak value of A = |H><H| - |V><V| for post-selection angle beta in
/// the zero-delay limit: -cot(beta).
double weak_value(double beta);

WeakValuePair weak_values(const SelectionConfig& selection);

/// <psi_f|A|psi_i> / <psi_f|psi_i> evaluated with the post-selected state
/// carrying the +-omega*tau/2 phases. Tends to weak_value(beta) as the
/// phase goes to zero.
std::complex<double> weak_value_at_phase(double beta, double omega_tau);

/// tau = pi theta^2 / (2 n0^2 omega), omega = 2 pi c / lambda.
double tilt_to_delay(double theta, double n0, double wavelength);

DelaySetting make_delay_setting(double theta, double n0, double wavelength);

/// |<psi_f(beta, tau)|psi_i>|^2; equals sin^2(beta) at tau = 0.
double postselection_probability(double beta, double tau, double omega);

}  // namespace wva

#pragma once

#include <complex>

namespace wva {

/// 1F1(1/2; 3/2; -z^2), evaluated through sqrt(pi)/(2z) * erf(z). Even in z,
/// equal to 1 at the origin and continuous there.
double hyp1f1_half(double z);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0, using
/// Weideman's rational expansion (40 terms, ~1e-14 relative accuracy).
/// Lower half-plane arguments use the reflection w(z) = 2exp(-z^2) - w(-z).
std::complex<double> faddeeva(std::complex<double> z);

/// Complementary error function of a complex argument.
std::complex<double> erfc(std::complex<double> z);

/// Dawson integral F(x) = exp(-x^2) * integral_0^x exp(t^2) dt.
double dawson(double x);

}  // namespace wva

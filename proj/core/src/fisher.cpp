#include "wva/fisher.hpp"

#include <cmath>
#include <limits>

#include "wva/error.hpp"

namespace wva {
namespace {

constexpr double kProbabilityFloor = 1e-12;
constexpr double kNormTolerance = 1e-9;

std::vector<double> checked(const RowProfile& profile, double tau) {
  auto p = profile(tau);
  double sum = 0.0;
  for (double v : p) sum += v;
  require(std::abs(sum - 1.0) <= kNormTolerance, ErrorKind::kNormalization,
          "row profile sums to " + std::to_string(sum) + " at tau = " + std::to_string(tau) + " as");
  return p;
}

double cfi_per_photon(const RowProfile& profile, double tau0, double h) {
  const auto p0 = checked(profile, tau0);
  const auto pp = checked(profile, tau0 + h);
  const auto pm = checked(profile, tau0 - h);
  require(pp.size() == p0.size() && pm.size() == p0.size(), ErrorKind::kShape, "row profile length changed with tau");
  double f = 0.0;
  for (std::size_t m = 0; m < p0.size(); ++m) {
    if (p0[m] < kProbabilityFloor) continue;
    const double d = (pp[m] - pm[m]) / (2.0 * h);
    f += d * d / p0[m];
  }
  return f;
}

}  // namespace

FisherResult fisher_information(const RowProfile& profile, double tau0_as, double delta_tau_as, double n_r,
                                bool check_step) {
  require(delta_tau_as > 0.0, ErrorKind::kInvalidArgument, "finite-difference step must be positive");
  require(n_r > 0.0, ErrorKind::kInvalidArgument, "photon number must be positive");
  FisherResult r;
  r.n_r = n_r;
  r.delta_tau = delta_tau_as;
  const double f1 = cfi_per_photon(profile, tau0_as, delta_tau_as);
  r.cfi = n_r * f1;
  r.infinite_crb = !(r.cfi > 0.0);
  r.crb = r.infinite_crb ? std::numeric_limits<double>::infinity() : 1.0 / r.cfi;
  if (check_step && f1 > 0.0) {
    const double f2 = cfi_per_photon(profile, tau0_as, 0.5 * delta_tau_as);
    r.step_change = std::abs(f1 - f2) / f2;
    r.converged = r.step_change < 0.005;
  }
  return r;
}

}  // namespace wva

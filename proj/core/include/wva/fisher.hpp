#pragma once

#include <functional>
#include <vector>

namespace wva {

/// Normalised distribution of detected photons over detector rows at a
/// given delay (attoseconds).
using RowProfile = std::function<std::vector<double>(double tau_as)>;

struct FisherResult {
  double cfi = 0.0;        // as^-2
  double crb = 0.0;        // as^2, infinite when cfi == 0
  double n_r = 0.0;
  double delta_tau = 0.0;  // as
  bool infinite_crb = false;
  /// Relative change of the CFI when the step is halved.
  double step_change = 0.0;
  bool converged = true;
};

/// F = n_r * sum_m (dp_m/dtau)^2 / p_m with a central difference of step
/// delta_tau. Rows with p_m < 1e-12 are skipped. NormalizationError when a
/// profile does not sum to 1 within 1e-9. With check_step the CFI is
/// recomputed at delta_tau/2 and `converged` reports a change below 0.5%.
FisherResult fisher_information(const RowProfile& profile, double tau0_as, double delta_tau_as, double n_r,
                                bool check_step = true);

}  // namespace wva

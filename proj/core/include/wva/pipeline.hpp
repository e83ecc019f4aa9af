#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wva/allan.hpp"
#include "wva/calibration.hpp"
#include "wva/config.hpp"
#include "wva/diffraction.hpp"
#include "wva/fisher.hpp"
#include "wva/fit.hpp"
#include "wva/psd.hpp"
#include "wva/registration.hpp"
#include "wva/timeseries.hpp"

namespace wva {

/// Delay-independent pieces of a configuration (arm fields on the detector
/// grid) plus the derived expected images, row profiles and Fisher bound.
class SimulationModel {
 public:
  explicit SimulationModel(const ExperimentConfig& config);

  [[nodiscard]] const ExperimentConfig& config() const noexcept { return config_; }
  [[nodiscard]] const CcdSpec& ccd() const noexcept { return ccd_; }

  /// Interference intensity at delay tau (attoseconds), arbitrary scale.
  [[nodiscard]] IntensityMap intensity(double tau_as) const;
  /// Mean ADU per pixel for n_r photons: gain applied and clipped at the
  /// saturation level, no rounding.
  [[nodiscard]] IntensityMap expected_counts(double tau_as, double n_r) const;
  /// Normalised row distribution p(m | tau).
  [[nodiscard]] std::vector<double> row_profile(double tau_as) const;

  /// One observation at delay tau: a Poisson frame when shot_noise is set,
  /// the expected counts otherwise. Reduced to the row marginal in marginal
  /// registration mode.
  [[nodiscard]] IntensityMap observe(double tau_as, double n_r, bool shot_noise, Rng& rng,
                                     Frame* frame_out = nullptr) const;
  /// Image reduction used for registration (identity or row marginal).
  [[nodiscard]] IntensityMap reduce(const IntensityMap& image) const;

  /// Shift per attosecond of the noiseless pattern around tau, by
  /// registration of tau +- h against the pattern at tau.
  [[nodiscard]] double model_slope(double tau_as) const;

  /// Fisher bound for one frame at tau with a step giving ~0.1 px shift.
  [[nodiscard]] FisherResult fisher(double tau_as, double n_r) const;

 private:
  ExperimentConfig config_;
  OpticalGeometry geometry_;
  SelectionConfig selection_;
  CcdSpec ccd_;
  ArmFields fields_;
  double omega_ = 0.0;
  bool marginal_ = false;
};

struct SimulationResult {
  CalibrationLine calibration;
  std::vector<ShiftEstimate> shifts;  // measurement frames
  TimeSeries tau_hat;                 // attoseconds
  std::vector<double> tau_true;       // attoseconds, after delay-channel noise
  double tau_measure = 0.0;           // attoseconds
  FisherResult fisher;
  AllanCurve allan;
  std::optional<PsdCurve> psd;
  double mean_tau_hat = 0.0;
  double var_tau_hat = 0.0;
  double saturation_fraction = 0.0;  // of measurement frame 0
};

struct SimulateOptions {
  bool write_outputs = true;
  bool compute_fisher = true;
  bool compute_spectra = true;
  /// Reuse an existing calibration instead of measuring one.
  std::optional<CalibrationLine> calibration;
};

/// Calibration line from the configured calibration delays.
CalibrationLine run_calibration(const ExperimentConfig& config, const SimulationModel& model);

/// Diffraction -> noise injection -> exposure -> registration ->
/// calibration -> delay series. Outputs go under out_dir when requested.
SimulationResult run_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                              const SimulateOptions& options = {});

inline constexpr std::string_view kFigureIds[] = {"allan_2a", "psd_2b", "scaling_3", "allan_nr_4", "allan_tau_5"};

struct ReproduceResult {
  std::vector<std::filesystem::path> files;
  /// Named scalar diagnostics (fitted slopes, ratios) also written to the
  /// figure's summary file.
  std::vector<std::pair<std::string, double>> metrics;

  [[nodiscard]] std::optional<double> metric(std::string_view name) const;
};

/// Writes the data behind one figure. UsageError for an unknown id.
ReproduceResult run_reproduce(std::string_view figure, const ExperimentConfig& config,
                              const std::filesystem::path& out_dir);

/// Synthetic technical-noise budget used by the figure reproductions when
/// the configuration leaves the noise section empty.
NoiseBudget default_figure_budget();

struct AnalyzeOptions {
  bool allan = true;
  bool psd = true;
  bool slope = false;
  double band_lo = 0.0;
  double band_hi = 0.0;
  AllanMode allan_mode = AllanMode::kOverlapping;
  PsdOptions psd_options;
};

struct AnalyzeResult {
  AllanCurve allan;
  std::optional<PsdCurve> psd;
  std::optional<SlopeFit> allan_slope;
  std::optional<SlopeFit> psd_slope;
};

/// Allan/PSD of an external two-column series.
AnalyzeResult run_analyze(const std::filesystem::path& series_csv, const std::filesystem::path& out_dir,
                          const AnalyzeOptions& options);

void write_allan_csv(const std::filesystem::path& path, const AllanCurve& curve, double sql_variance,
                     const OutputHeader& header);
void write_psd_csv(const std::filesystem::path& path, const PsdCurve& curve, const OutputHeader& header);

}  // namespace wva

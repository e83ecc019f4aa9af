#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wva/ccd.hpp"
#include "wva/diffraction.hpp"
#include "wva/noisegen.hpp"
#include "wva/polarization.hpp"
#include "wva/psd.hpp"
#include "wva/registration.hpp"

namespace wva {

/// Everything a run needs. Angles are degrees and lengths carry their unit
/// in the key name; conversion to SI happens in the accessors.
struct ExperimentConfig {
  struct Optics {
    double wavelength_nm = 632.992;
    double sigma_xy_mm = 0.325;
    double d1_mm = 0.425;
    double f_d_m = 1.0;
    double n0 = 1.54;
  } optics;

  struct Selection {
    double beta_u_deg = 1.6;
    double beta_d_deg = -1.6;
  } selection;

  struct Delays {
    std::vector<double> calibration_theta_deg = {4.0, 5.0, 6.0};
    double measure_theta_deg = 5.0;
    /// When >= 0, overrides measure_theta_deg with a delay in attoseconds.
    double measure_tau_as = -1.0;
  } delays;

  struct Ccd {
    std::size_t rows = 1024;
    std::size_t cols = 1024;
    double pitch_um = 1.85;
    int bit_depth = 8;
    double quantum_efficiency = 0.856;
    double gain = 1.0;
    std::string photon_mode = "detected";  // or "incident"
  } ccd;

  /// Amplitudes in channel units: attoseconds for delay_offset, pixels for
  /// fringe_offset.
  struct Noise {
    double white_sigma = 0.0;
    double flicker_amp = 0.0;
    double rw_amp = 0.0;
    std::string channel = "delay_offset";
  } noise;

  struct Registration {
    int kappa = 100;
    std::string weighting = "log";
    double log_floor = 0.03;
    std::string reference = "model";  // first | mean | model
    std::string mode = "image";        // image | marginal
    bool mask_saturated = false;
  } registration;

  struct Run {
    std::size_t frames = 1000;
    double sample_rate_hz = 100.0;
    double n_r = 3.6e4;
    std::uint64_t seed = 1;
    std::size_t calibration_frames = 200;
    bool shot_noise = true;
    bool calibration_shot_noise = true;
    std::string propagation = "closed_form";  // or numeric
    std::size_t save_frames = 2;
    std::size_t workers = 0;
  } run;

  struct Analysis {
    std::string psd_method = "averaged";
    std::string psd_window = "hann";
    std::size_t psd_segments = 8;
    int allan_per_decade = 10;
    std::string allan_mode = "overlapping";  // or adjacent
  } analysis;

  // Derived views in SI units.
  [[nodiscard]] OpticalGeometry geometry() const;
  [[nodiscard]] SelectionConfig selection_rad() const;
  [[nodiscard]] CcdSpec ccd_spec() const;
  [[nodiscard]] NoiseBudget noise_budget() const;
  [[nodiscard]] RegistrationOptions registration_options() const;
  [[nodiscard]] PsdOptions psd_options() const;
  [[nodiscard]] double omega() const;
  /// Delay of the measurement series, attoseconds.
  [[nodiscard]] double measure_tau_as_resolved() const;
  [[nodiscard]] std::vector<double> calibration_taus_as() const;

  /// Throws on inconsistent values.
  void validate() const;

  /// Assigns one dotted key, e.g. ("run.frames", "500"). UsageError for
  /// unknown keys, FormatError for unparsable values.
  void set(std::string_view key, std::string_view value);

  /// Section/key text; parse(serialize(c)) == c.
  [[nodiscard]] std::string serialize() const;
  /// 16 hex digits of FNV-1a over serialize(). run.workers is left out:
  /// it changes the schedule, never the result.
  [[nodiscard]] std::string hash() const;

  static ExperimentConfig parse(std::string_view text, const std::string& source = "<config>");
  static ExperimentConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return a.serialize() == b.serialize(); }
};

std::uint64_t fnv1a(std::string_view text) noexcept;

}  // namespace wva

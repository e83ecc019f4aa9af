#include "wva/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "wva/ccd.hpp"
#include "wva/csv.hpp"
#include "wva/error.hpp"
#include "wva/frame_io.hpp"
#include "wva/noisegen.hpp"
#include "wva/parallel.hpp"
#include "wva/units.hpp"

namespace wva {
namespace {

constexpr double kFigureWhiteFloorPx = 20.0;

OutputHeader header_for(const ExperimentConfig& config, std::vector<std::pair<std::string, std::string>> extra = {}) {
  OutputHeader h;
  h.config_hash = config.hash();
  h.seed = config.run.seed;
  h.synthetic = true;
  h.extra = std::move(extra);
  return h;
}

IntensityMap row_marginal_image(const IntensityMap& image) {
  IntensityMap out(GridSpec{image.rows(), 1, image.pitch()});
  for (std::size_t r = 0; r < image.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < image.cols(); ++c) s += image(r, c);
    out(r, 0) = s;
  }
  return out;
}

double mean_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

/// Reference image(s) for one run. Model and first-frame policies share one
/// registrar; the mean policy builds a leave-one-out reference per frame.
class ReferenceSet {
 public:
  ReferenceSet(ReferencePolicy policy, const RegistrationOptions& options) : policy_(policy), options_(options) {}

  void set_single(const IntensityMap& image) { single_.emplace(image, options_); }

  void set_sum(std::vector<double> sum, GridSpec grid, std::size_t count) {
    sum_ = std::move(sum);
    grid_ = grid;
    count_ = count;
    IntensityMap mean(grid);
    auto v = mean.values();
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = sum_[p] / static_cast<double>(count_);
    single_.emplace(mean, options_);
  }

  /// Registrar for an observation that is not part of the mean.
  [[nodiscard]] const Registrar& global() const { return *single_; }

  [[nodiscard]] ShiftEstimate measure(const IntensityMap& obs) const {
    if (policy_ != ReferencePolicy::kMean) return single_->estimate(obs);
    IntensityMap ref(grid_);
    auto v = ref.values();
    const auto o = obs.values();
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = (sum_[p] - o[p]) / static_cast<double>(count_ - 1);
    return Registrar(ref, options_).estimate(obs);
  }

 private:
  ReferencePolicy policy_;
  RegistrationOptions options_;
  std::optional<Registrar> single_;
  std::vector<double> sum_;
  GridSpec grid_{};
  std::size_t count_ = 0;
};

CalibrationLine calibrate_against(const ExperimentConfig& config, const SimulationModel& model,
                                  const Registrar& reference) {
  const auto taus = config.calibration_taus_as();
  const std::size_t per_point = config.run.calibration_shot_noise ? config.run.calibration_frames : 1;
  std::vector<CalibrationPoint> points(taus.size());
  for (std::size_t c = 0; c < taus.size(); ++c) {
    std::vector<double> dy(per_point);
    parallel_for(
        per_point,
        [&](std::size_t j) {
          Rng rng = make_stream(config.run.seed, StreamBlock::kCalibration, c * per_point + j);
          const auto obs = model.observe(taus[c], config.run.n_r, config.run.calibration_shot_noise, rng);
          dy[j] = reference.estimate(obs).dy;
        },
        config.run.workers);
    points[c] = {taus[c], mean_of(dy)};
  }
  return calibrate(points);
}

}  // namespace

// ---------------------------------------------------------------------------

SimulationModel::SimulationModel(const ExperimentConfig& config)
    : config_(config),
      geometry_(config.geometry()),
      selection_(config.selection_rad()),
      ccd_(config.ccd_spec()),
      omega_(config.omega()),
      marginal_(config.registration.mode == "marginal") {
  config_.validate();
  const auto path = config.run.propagation == "numeric" ? Propagation::kNumeric : Propagation::kClosedForm;
  fields_ = compute_arm_fields(geometry_, ccd_.grid(), path);
}

IntensityMap SimulationModel::intensity(double tau_as) const {
  return interference_intensity(fields_, selection_, tau_as * kAttosecond, omega_);
}

IntensityMap SimulationModel::expected_counts(double tau_as, double n_r) const {
  auto img = intensity(tau_as);
  auto v = img.values();
  double sum = 0.0;
  for (double x : v) sum += x;
  require(sum > 0.0, ErrorKind::kEmptyIntensity, "intensity map integrates to zero");
  const double total = config_.ccd.photon_mode == "incident" ? n_r * ccd_.quantum_efficiency : n_r;
  const double sat = ccd_.saturation();
  for (double& x : v) x = std::min(ccd_.gain * total * x / sum, sat);
  return img;
}

std::vector<double> SimulationModel::row_profile(double tau_as) const {
  const auto img = intensity(tau_as);
  std::vector<double> p(img.rows(), 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) p[r] += img(r, c);
    total += p[r];
  }
  for (double& x : p) x /= total;
  return p;
}

IntensityMap SimulationModel::reduce(const IntensityMap& image) const {
  return marginal_ ? row_marginal_image(image) : image;
}

IntensityMap SimulationModel::observe(double tau_as, double n_r, bool shot_noise, Rng& rng, Frame* frame_out) const {
  if (!shot_noise) return reduce(expected_counts(tau_as, n_r));
  const auto mode = config_.ccd.photon_mode == "incident" ? PhotonBudget::kIncident : PhotonBudget::kDetected;
  Frame f = PhotonSampler(intensity(tau_as), n_r, ccd_, mode).expose(rng);
  auto img = reduce(to_image(f));
  if (frame_out) *frame_out = std::move(f);
  return img;
}

double SimulationModel::model_slope(double tau_as) const {
  // Row profiles carry all the delay information, so a 1-D registration
  // at fine upsampling is enough here.
  auto profile_image = [&](double t) {
    const auto p = row_profile(t);
    IntensityMap m(GridSpec{p.size(), 1, ccd_.pixel_pitch});
    std::copy(p.begin(), p.end(), m.values().begin());
    return m;
  };
  RegistrationOptions opt;
  opt.upsample = 1000;
  const Registrar reg(profile_image(tau_as), opt);
  auto slope_at = [&](double h) {
    return (reg.estimate(profile_image(tau_as + h)).dy - reg.estimate(profile_image(tau_as - h)).dy) / (2.0 * h);
  };
  double k = slope_at(0.1);
  if (std::abs(k) > 0.0) k = slope_at(std::clamp(1.0 / std::abs(k), 1e-3, 1.0));
  return k;
}

FisherResult SimulationModel::fisher(double tau_as, double n_r) const {
  const double k = model_slope(tau_as);
  const double step = std::abs(k) > 0.0 ? 0.1 / std::abs(k) : 0.01;
  const double total = config_.ccd.photon_mode == "incident" ? n_r * ccd_.quantum_efficiency : n_r;
  return fisher_information([this](double t) { return row_profile(t); }, tau_as, step, total);
}

// ---------------------------------------------------------------------------

CalibrationLine run_calibration(const ExperimentConfig& config, const SimulationModel& model) {
  const auto options = config.registration_options();
  const double tau = config.measure_tau_as_resolved();
  const Registrar reference(model.reduce(model.expected_counts(tau, config.run.n_r)), options);
  return calibrate_against(config, model, reference);
}

SimulationResult run_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                              const SimulateOptions& options) {
  config.validate();
  const SimulationModel model(config);
  const auto reg_options = config.registration_options();
  const auto policy = parse_reference_policy(config.registration.reference);
  const auto budget = config.noise_budget();
  const std::size_t frames = config.run.frames;
  const double dt = 1.0 / config.run.sample_rate_hz;
  const double n_r = config.run.n_r;
  const bool shot = config.run.shot_noise;

  SimulationResult result;
  result.tau_measure = config.measure_tau_as_resolved();

  // Technical noise, one sample per measurement frame.
  TimeSeries drift{std::vector<double>(frames, 0.0), dt, 0};
  if (!budget.silent()) drift = synthesize(budget, frames, dt, config.run.seed);
  const bool delay_channel = budget.channel == NoiseChannel::kDelayOffset;
  result.tau_true = delay_channel ? inject(result.tau_measure, drift, frames)
                                  : std::vector<double>(frames, result.tau_measure);

  auto observe = [&](std::size_t i, Frame* keep) {
    Rng rng = make_stream(config.run.seed, StreamBlock::kMeasurement, i);
    return model.observe(result.tau_true[i], n_r, shot, rng, keep);
  };

  ReferenceSet refs(policy, reg_options);
  switch (policy) {
    case ReferencePolicy::kExternal:
      refs.set_single(model.reduce(model.expected_counts(result.tau_measure, n_r)));
      break;
    case ReferencePolicy::kFirst:
      refs.set_single(observe(0, nullptr));
      break;
    case ReferencePolicy::kMean: {
      // First pass accumulates the mean; frames are regenerated from their
      // substreams in the second pass instead of being held in memory.
      const auto first = observe(0, nullptr);
      std::vector<double> sum(first.values().begin(), first.values().end());
      for (std::size_t i = 1; i < frames; ++i) {
        const auto obs = observe(i, nullptr);
        const auto v = obs.values();
        for (std::size_t p = 0; p < sum.size(); ++p) sum[p] += v[p];
      }
      refs.set_sum(std::move(sum), first.spec(), frames);
      break;
    }
  }

  try {
    result.calibration = options.calibration ? *options.calibration : calibrate_against(config, model, refs.global());
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("calibration stage: ") + e.what());
  }

  const bool write = options.write_outputs && !out_dir.empty();
  if (write) {
    std::filesystem::create_directories(out_dir);
    if (config.run.save_frames > 0 && shot) std::filesystem::create_directories(out_dir / "frames");
  }

  result.shifts.resize(frames);
  std::vector<double> sat_fraction(1, 0.0);
  try {
    parallel_for(
        frames,
        [&](std::size_t i) {
          Frame frame;
          const bool keep = shot && (i == 0 || (write && i < config.run.save_frames));
          auto obs = observe(i, keep ? &frame : nullptr);
          auto est = refs.measure(obs);
          if (!delay_channel) est.dy += drift.samples[i];
          result.shifts[i] = est;
          if (keep) {
            if (i == 0) sat_fraction[0] = saturation_fraction(frame);
            if (write && i < config.run.save_frames) {
              char name[32];
              std::snprintf(name, sizeof name, "frame_%05zu.pgm", i);
              write_pgm(out_dir / "frames" / name, frame);
            }
          }
        },
        config.run.workers);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("measurement stage: ") + e.what());
  }
  result.saturation_fraction = sat_fraction[0];

  result.tau_hat = TimeSeries{std::vector<double>(frames), dt, 0};
  for (std::size_t i = 0; i < frames; ++i)
    result.tau_hat.samples[i] = estimate_tau(result.shifts[i].dy, result.calibration);
  result.mean_tau_hat = mean_of(result.tau_hat.samples);
  result.var_tau_hat = variance_of(result.tau_hat.samples);

  if (options.compute_fisher) result.fisher = model.fisher(result.tau_measure, n_r);
  if (options.compute_spectra) {
    const auto mode = config.analysis.allan_mode == "adjacent" ? AllanMode::kAdjacentSample : AllanMode::kOverlapping;
    const auto grid = log_n_grid(frames, config.analysis.allan_per_decade);
    result.allan = allan_curve(result.tau_hat, grid, mode);
    try {
      result.psd = psd(result.tau_hat, config.psd_options());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInsufficientData) throw;
    }
  }

  if (write) {
    const auto header = header_for(config);
    auto saved = config;
    saved.run.workers = 0;
    saved.save(out_dir / "config.toml");
    {
      std::ofstream out(out_dir / "calibration.json", std::ios::binary | std::ios::trunc);
      out << to_json(result.calibration, header.config_hash, header.seed, true);
    }
    {
      CsvWriter out(out_dir / "shifts.csv", header, {"frame_index", "t_seconds", "dy_pixels", "dx_pixels", "peak_value"});
      for (std::size_t i = 0; i < frames; ++i)
        out.row({static_cast<double>(i), result.tau_hat.time(i), result.shifts[i].dy, result.shifts[i].dx,
                 result.shifts[i].peak_value});
    }
    write_series_csv(out_dir / "tau.csv", result.tau_hat, header, "tau_as");
    if (options.compute_spectra) {
      write_allan_csv(out_dir / "allan.csv", result.allan, options.compute_fisher ? result.fisher.crb : 0.0, header);
      if (result.psd) write_psd_csv(out_dir / "psd.csv", *result.psd, header);
    }
    CsvWriter out(out_dir / "summary.csv", header, {"key", "value"});
    auto kv = [&](std::string_view k, double v) { out.text_row({k, format_double(v)}); };
    kv("tau_set_as", result.tau_measure);
    kv("calibration_slope_px_per_as", result.calibration.slope);
    kv("calibration_intercept_px", result.calibration.intercept);
    kv("mean_tau_hat_as", result.mean_tau_hat);
    kv("var_tau_hat_as2", result.var_tau_hat);
    if (options.compute_fisher) {
      kv("cfi_per_frame_as-2", result.fisher.cfi);
      kv("crb_as2", result.fisher.crb);
      kv("var_over_crb", result.var_tau_hat / result.fisher.crb);
    }
    kv("saturation_fraction_frame0", result.saturation_fraction);
  }
  return result;
}

// ---------------------------------------------------------------------------

std::optional<double> ReproduceResult::metric(std::string_view name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  return std::nullopt;
}

NoiseBudget default_figure_budget() {
  NoiseBudget b;
  b.flicker_amp = 2e-5;  // as^2/Hz at 1 Hz
  b.rw_amp = 3e-4;
  b.channel = NoiseChannel::kDelayOffset;
  return b;
}

namespace {

ExperimentConfig with_figure_budget(ExperimentConfig c) {
  if (c.noise_budget().silent()) {
    const auto b = default_figure_budget();
    c.noise.flicker_amp = b.flicker_amp;
    c.noise.rw_amp = b.rw_amp;
    c.noise.channel = std::string(to_string(b.channel));
  }
  return c;
}

std::string tag(double v) { return format_double(v); }

void write_metrics(const std::filesystem::path& path, const ReproduceResult& r, const OutputHeader& h) {
  CsvWriter out(path, h, {"metric", "value"});
  for (const auto& [k, v] : r.metrics) out.text_row({k, format_double(v)});
}

SimulateOptions quiet() {
  SimulateOptions o;
  o.write_outputs = false;
  return o;
}

}  // namespace

ReproduceResult run_reproduce(std::string_view figure, const ExperimentConfig& config_in,
                              const std::filesystem::path& out_dir) {
  require(std::find(std::begin(kFigureIds), std::end(kFigureIds), figure) != std::end(kFigureIds), ErrorKind::kUsage,
          "unknown figure id '" + std::string(figure) + "'");
  config_in.validate();
  std::filesystem::create_directories(out_dir);
  ReproduceResult r;
  const std::string fig(figure);

  if (figure == "allan_2a" || figure == "psd_2b") {
    const auto config = with_figure_budget(config_in);
    const auto header = header_for(config, {{"figure", fig}, {"noise_budget", "synthetic"}});
    auto opts = quiet();
    const auto sim = run_simulate(config, {}, opts);
    if (figure == "allan_2a") {
      const auto path = out_dir / "allan_2a.csv";
      write_allan_csv(path, sim.allan, sim.fisher.crb, header);
      r.files.push_back(path);
      r.metrics.emplace_back("crb_as2", sim.fisher.crb);
      r.metrics.emplace_back("allan_first_over_sql", sim.allan.points.front().sigma2 / sim.fisher.crb);
      // Upturn: stop a decade short of T_max, where few independent windows
      // remain and the log-domain fit is biased low.
      const double t_max = sim.allan.points.back().T;
      try {
        const auto fit = slope_fit(sim.allan, t_max / 200.0, t_max / 10.0);
        r.metrics.emplace_back("upturn_slope", fit.slope);
      } catch (const Error&) {
      }
    } else {
      require(sim.psd.has_value(), ErrorKind::kInsufficientData, "series too short for a PSD");
      const auto path = out_dir / "psd_2b.csv";
      write_psd_csv(path, *sim.psd, header);
      r.files.push_back(path);
      const double f_hi = sim.psd->points.back().f;
      try {
        r.metrics.emplace_back("low_band_slope", slope_fit(*sim.psd, sim.psd->points.front().f, f_hi / 20.0).slope);
      } catch (const Error&) {
      }
    }
  } else if (figure == "scaling_3") {
    const auto header = header_for(config_in, {{"figure", fig}});
    ExperimentConfig wva = config_in;
    ExperimentConfig nowva = config_in;
    nowva.selection.beta_u_deg = 45.0;
    nowva.selection.beta_d_deg = -45.0;
    if (nowva.noise_budget().silent()) {
      nowva.noise.white_sigma = kFigureWhiteFloorPx;
      nowva.noise.channel = "fringe_offset";
    }
    const SimulationModel wva_model(wva), nowva_model(nowva);
    auto wva_opts = quiet(), nowva_opts = quiet();
    wva_opts.compute_spectra = nowva_opts.compute_spectra = false;
    wva_opts.compute_fisher = nowva_opts.compute_fisher = false;
    wva_opts.calibration = run_calibration(wva, wva_model);
    nowva_opts.calibration = run_calibration(nowva, nowva_model);

    const double nr_grid[] = {1e3, 3.1622776601683795e3, 1e4, 3.1622776601683795e4, 1e5};
    std::vector<std::pair<double, double>> pw, pn;
    const auto path = out_dir / "scaling_3.csv";
    CsvWriter out(path, header, {"n_r", "variance_wva", "variance_nowva", "sql_wva", "sql_nowva"});
    for (double nr : nr_grid) {
      wva.run.n_r = nowva.run.n_r = nr;
      const auto a = run_simulate(wva, {}, wva_opts);
      const auto b = run_simulate(nowva, {}, nowva_opts);
      const double sa = wva_model.fisher(a.tau_measure, nr).crb;
      const double sb = nowva_model.fisher(b.tau_measure, nr).crb;
      out.row({nr, a.var_tau_hat, b.var_tau_hat, sa, sb});
      pw.emplace_back(nr, a.var_tau_hat);
      pn.emplace_back(nr, b.var_tau_hat);
    }
    r.files.push_back(path);
    r.metrics.emplace_back("slope_wva", scaling_fit(pw).slope);
    r.metrics.emplace_back("slope_nowva", scaling_fit(pn).slope);
    r.metrics.emplace_back("calibration_slope_wva", wva_opts.calibration->slope);
    r.metrics.emplace_back("calibration_slope_nowva", nowva_opts.calibration->slope);
  } else {
    const auto base = with_figure_budget(config_in);
    const auto header = header_for(base, {{"figure", fig}, {"noise_budget", "synthetic"}});
    const bool by_nr = figure == "allan_nr_4";
    const std::vector<double> sweep = by_nr ? std::vector<double>{1e3, 1e4, 3.6e4, 1e5}
                                            : std::vector<double>{0.2, 1.0, 4.3, 6.7};
    const auto path = out_dir / (fig + ".csv");
    CsvWriter out(path, header,
                  {by_nr ? "n_r" : "tau_as", "T_seconds", "allan_variance", "n", "windows_used", "sql_variance"});
    const SimulationModel model(base);
    auto opts = quiet();
    opts.calibration = run_calibration(base, model);
    for (double v : sweep) {
      ExperimentConfig c = base;
      if (by_nr) c.run.n_r = v;
      else c.delays.measure_tau_as = v;
      const auto sim = run_simulate(c, {}, opts);
      for (const auto& p : sim.allan.points)
        out.row({v, p.T, p.sigma2, static_cast<double>(p.n), static_cast<double>(p.windows_used), sim.fisher.crb});
      r.metrics.emplace_back("short_over_sql_" + tag(v), sim.allan.points.front().sigma2 / sim.fisher.crb);
    }
    r.files.push_back(path);
  }

  const auto summary = out_dir / (fig + "_summary.csv");
  write_metrics(summary, r, header_for(config_in, {{"figure", fig}}));
  r.files.push_back(summary);
  return r;
}

// ---------------------------------------------------------------------------

void write_allan_csv(const std::filesystem::path& path, const AllanCurve& curve, double sql_variance,
                     const OutputHeader& header) {
  CsvWriter out(path, header, {"T_seconds", "allan_variance", "n", "windows_used", "sql_variance"});
  for (const auto& p : curve.points)
    out.row({p.T, p.sigma2, static_cast<double>(p.n), static_cast<double>(p.windows_used), sql_variance});
}

void write_psd_csv(const std::filesystem::path& path, const PsdCurve& curve, const OutputHeader& header) {
  CsvWriter out(path, header, {"freq_hz", "psd"});
  for (const auto& p : curve.points) out.row({p.f, p.S});
}

AnalyzeResult run_analyze(const std::filesystem::path& series_csv, const std::filesystem::path& out_dir,
                          const AnalyzeOptions& options) {
  const auto series = read_series_csv(series_csv);
  AnalyzeResult r;
  OutputHeader header;
  {
    std::ifstream in(series_csv, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    header.config_hash = buf;
  }
  header.synthetic = false;
  header.extra.emplace_back("source", series_csv.filename().string());
  std::filesystem::create_directories(out_dir);

  if (options.allan) {
    r.allan = allan_curve(series, options.allan_mode);
    write_allan_csv(out_dir / "allan.csv", r.allan, 0.0, header);
  }
  if (options.psd) {
    r.psd = psd(series, options.psd_options);
    write_psd_csv(out_dir / "psd.csv", *r.psd, header);
  }
  if (options.slope) {
    CsvWriter out(out_dir / "slopes.csv", header, {"curve", "band_lo", "band_hi", "slope", "stderr", "points"});
    auto emit = [&](std::string_view name, const SlopeFit& f, double lo, double hi) {
      out.text_row({name, format_double(lo), format_double(hi), format_double(f.slope), format_double(f.stderr_slope),
                    std::to_string(f.points)});
    };
    if (options.allan) {
      const double lo = options.band_hi > 0 ? options.band_lo : r.allan.points.front().T;
      const double hi = options.band_hi > 0 ? options.band_hi : r.allan.points.back().T;
      r.allan_slope = slope_fit(r.allan, lo, hi);
      emit("allan", *r.allan_slope, lo, hi);
    }
    if (r.psd) {
      const double lo = options.band_hi > 0 ? options.band_lo : r.psd->points.front().f;
      const double hi = options.band_hi > 0 ? options.band_hi : r.psd->points.back().f;
      r.psd_slope = slope_fit(*r.psd, lo, hi);
      emit("psd", *r.psd_slope, lo, hi);
    }
  }
  return r;
}

}  // namespace wva

// wva: command-line front end for the simulation and analysis pipeline.
//
// Exit status: 0 success, 2 usage error, 1 runtime error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wva/calibration.hpp"
#include "wva/config.hpp"
#include "wva/csv.hpp"
#include "wva/error.hpp"
#include "wva/pipeline.hpp"

namespace {

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
  long long seed = -1;
  long long frames = -1;
  double n_r = -1.0;
  long long workers = -1;
};

void add_config_args(CLI::App* cmd, ConfigArgs& a) {
  cmd->add_option("-c,--config", a.path, "Configuration file")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", a.overrides, "Override a config key, e.g. --set run.frames=500")->take_all();
  cmd->add_option("--seed", a.seed, "Master seed");
  cmd->add_option("--frames", a.frames, "Measurement frames");
  cmd->add_option("--nr", a.n_r, "Detected photons per frame");
  cmd->add_option("-j,--workers", a.workers, "Worker threads (0 = all cores)");
}

// defaults < config file < --set < dedicated flags
wva::ExperimentConfig resolve(const ConfigArgs& a) {
  auto c = a.path.empty() ? wva::ExperimentConfig{} : wva::ExperimentConfig::load(a.path);
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw wva::Error(wva::ErrorKind::kUsage, "--set expects key=value, got " + kv);
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed >= 0) c.run.seed = static_cast<std::uint64_t>(a.seed);
  if (a.frames >= 0) c.run.frames = static_cast<std::size_t>(a.frames);
  if (a.n_r > 0) c.run.n_r = a.n_r;
  if (a.workers >= 0) c.run.workers = static_cast<std::size_t>(a.workers);
  c.validate();
  return c;
}

std::vector<wva::CalibrationPoint> read_points(const std::string& path) {
  // Same two-column layout as a series file, without the uniform-spacing rule.
  std::ifstream in(path);
  if (!in) throw wva::Error(wva::ErrorKind::kIo, "cannot open " + path);
  std::vector<wva::CalibrationPoint> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t = 0, s = 0;
    std::string extra;
    if (!(ss >> t >> s)) {
      if (pts.empty()) continue;  // header
      throw wva::Error(wva::ErrorKind::kFormat, path + ":" + std::to_string(lineno) + ": expected tau_as, shift");
    }
    if (ss >> extra)
      throw wva::Error(wva::ErrorKind::kFormat, path + ":" + std::to_string(lineno) + ": expected 2 columns");
    pts.push_back({t, s});
  }
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-value-amplified attosecond delay interferometer: simulation and noise analysis"};
  app.set_version_flag("--version", std::string(wva::version()));
  app.require_subcommand(1);

  ConfigArgs sim_args;
  std::string sim_out = "run";
  bool dry_run = false;
  auto* sim = app.add_subcommand("simulate", "Run calibration and a delay measurement series");
  add_config_args(sim, sim_args);
  sim->add_option("-o,--out", sim_out, "Output directory");
  sim->add_flag("--dry-run", dry_run, "Print the resolved configuration and exit");

  ConfigArgs rep_args;
  std::string figure;
  std::string rep_out = "figures";
  auto* rep = app.add_subcommand("reproduce", "Write the data behind one figure");
  rep->add_option("figure", figure, "allan_2a | psd_2b | scaling_3 | allan_nr_4 | allan_tau_5")->required();
  add_config_args(rep, rep_args);
  rep->add_option("-o,--out", rep_out, "Output directory");

  std::string series_path;
  std::string ana_out = "analysis";
  std::vector<std::string> commands;
  std::vector<double> band;
  std::string allan_mode = "overlapping";
  std::string psd_method = "averaged";
  std::string window = "hann";
  std::size_t segments = 8;
  auto* ana = app.add_subcommand("analyze", "Allan variance / PSD / slopes of a two-column series");
  ana->add_option("series", series_path, "CSV with t_seconds,value")->required()->check(CLI::ExistingFile);
  ana->add_option("--do", commands, "Any of allan, psd, slope (default allan psd)")
      ->check(CLI::IsMember({"allan", "psd", "slope"}));
  ana->add_option("--band", band, "Fit band lo hi (seconds for Allan, Hz for PSD)")->expected(2);
  ana->add_option("--allan-mode", allan_mode)->check(CLI::IsMember({"overlapping", "adjacent"}));
  ana->add_option("--psd-method", psd_method)->check(CLI::IsMember({"averaged", "periodogram"}));
  ana->add_option("--window", window)->check(CLI::IsMember({"hann", "rect"}));
  ana->add_option("--segments", segments);
  ana->add_option("-o,--out", ana_out, "Output directory");

  ConfigArgs cal_args;
  std::string cal_points;
  std::string cal_out;
  auto* cal = app.add_subcommand("calibrate", "Fit a calibration line from points or from a noiseless simulation");
  cal->add_option("--points", cal_points, "CSV of tau_as,mean_shift")->check(CLI::ExistingFile);
  add_config_args(cal, cal_args);
  cal->add_option("-o,--out", cal_out, "Write calibration.json here instead of stdout");

  ConfigArgs cfi_args;
  double cfi_tau = -1.0;
  auto* cfi = app.add_subcommand("cfi", "Classical Fisher information and Cramer-Rao bound per frame");
  add_config_args(cfi, cfi_args);
  cfi->add_option("--tau", cfi_tau, "Delay in attoseconds (default: measurement delay)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) {
      const auto config = resolve(sim_args);
      if (dry_run) {
        std::cout << config.serialize();
        return 0;
      }
      const auto r = wva::run_simulate(config, sim_out);
      std::printf("config %s  seed %llu\n", config.hash().c_str(), static_cast<unsigned long long>(config.run.seed));
      std::printf("calibration slope %.6g px/as  intercept %.6g px\n", r.calibration.slope, r.calibration.intercept);
      std::printf("tau set %.6g as  mean estimate %.6g as  variance %.6g as^2\n", r.tau_measure, r.mean_tau_hat,
                  r.var_tau_hat);
      std::printf("CRB %.6g as^2  variance/CRB %.4g\n", r.fisher.crb, r.var_tau_hat / r.fisher.crb);
      std::printf("outputs in %s\n", sim_out.c_str());
    } else if (*rep) {
      const auto config = resolve(rep_args);
      const auto r = wva::run_reproduce(figure, config, rep_out);
      for (const auto& [k, v] : r.metrics) std::printf("%-28s %.6g\n", k.c_str(), v);
      for (const auto& f : r.files) std::printf("wrote %s\n", f.string().c_str());
    } else if (*ana) {
      wva::AnalyzeOptions o;
      if (!commands.empty()) {
        o.allan = o.psd = o.slope = false;
        for (const auto& c : commands) {
          if (c == "allan") o.allan = true;
          if (c == "psd") o.psd = true;
          if (c == "slope") o.slope = true;
        }
        if (o.slope && !o.allan && !o.psd) o.allan = o.psd = true;
      }
      if (band.size() == 2) {
        o.band_lo = band[0];
        o.band_hi = band[1];
      }
      o.allan_mode = allan_mode == "adjacent" ? wva::AllanMode::kAdjacentSample : wva::AllanMode::kOverlapping;
      o.psd_options.method = wva::parse_psd_method(psd_method);
      o.psd_options.window = wva::parse_window(window);
      o.psd_options.segments = segments;
      const auto r = wva::run_analyze(series_path, ana_out, o);
      if (r.allan_slope) std::printf("allan slope %.4f +- %.4f\n", r.allan_slope->slope, r.allan_slope->stderr_slope);
      if (r.psd_slope) std::printf("psd slope %.4f +- %.4f\n", r.psd_slope->slope, r.psd_slope->stderr_slope);
      std::printf("outputs in %s\n", ana_out.c_str());
    } else if (*cal) {
      wva::CalibrationLine line;
      std::string hash;
      std::uint64_t seed = 0;
      bool synthetic = true;
      if (!cal_points.empty()) {
        line = wva::calibrate(read_points(cal_points));
        synthetic = false;
      } else {
        auto config = resolve(cal_args);
        config.run.calibration_shot_noise = false;
        const wva::SimulationModel model(config);
        line = wva::run_calibration(config, model);
        hash = config.hash();
        seed = config.run.seed;
      }
      const auto json = wva::to_json(line, hash, seed, synthetic);
      if (cal_out.empty()) {
        std::cout << json;
      } else {
        std::ofstream(cal_out, std::ios::binary | std::ios::trunc) << json;
      }
    } else if (*cfi) {
      const auto config = resolve(cfi_args);
      const wva::SimulationModel model(config);
      const double tau = cfi_tau >= 0 ? cfi_tau : config.measure_tau_as_resolved();
      const auto f = model.fisher(tau, config.run.n_r);
      std::printf("tau %.6g as  n_r %.6g  step %.4g as\n", tau, f.n_r, f.delta_tau);
      std::printf("cfi %.6g as^-2  crb %.6g as^2%s\n", f.cfi, f.crb, f.infinite_crb ? "  (no information)" : "");
      if (!f.converged) std::printf("warning: CFI changed by %.3g%% when halving the step\n", 100 * f.step_change);
    }
  } catch (const wva::Error& e) {
    std::fprintf(stderr, "wva: %s\n", e.what());
    return e.kind() == wva::ErrorKind::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wva: %s\n", e.what());
    return 1;
  }
  return 0;
}

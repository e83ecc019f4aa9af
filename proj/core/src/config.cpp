#include "wva/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

#include "wva/csv.hpp"
#include "wva/error.hpp"
#include "wva/units.hpp"

namespace wva {
namespace {

static_assert(std::is_same_v<std::size_t, std::uint64_t>, "config slots assume a 64-bit size_t");
using Slot = std::variant<double*, std::size_t*, int*, bool*, std::string*, std::vector<double>*>;

struct Field {
  std::string_view section;
  std::string_view key;
  Slot slot;
};

std::vector<Field> fields(ExperimentConfig& c) {
  return {
      {"optics", "wavelength_nm", &c.optics.wavelength_nm},
      {"optics", "sigma_xy_mm", &c.optics.sigma_xy_mm},
      {"optics", "d1_mm", &c.optics.d1_mm},
      {"optics", "f_d_m", &c.optics.f_d_m},
      {"optics", "n0", &c.optics.n0},
      {"selection", "beta_u_deg", &c.selection.beta_u_deg},
      {"selection", "beta_d_deg", &c.selection.beta_d_deg},
      {"delays", "calibration_theta_deg", &c.delays.calibration_theta_deg},
      {"delays", "measure_theta_deg", &c.delays.measure_theta_deg},
      {"delays", "measure_tau_as", &c.delays.measure_tau_as},
      {"ccd", "rows", &c.ccd.rows},
      {"ccd", "cols", &c.ccd.cols},
      {"ccd", "pitch_um", &c.ccd.pitch_um},
      {"ccd", "bit_depth", &c.ccd.bit_depth},
      {"ccd", "quantum_efficiency", &c.ccd.quantum_efficiency},
      {"ccd", "gain", &c.ccd.gain},
      {"ccd", "photon_mode", &c.ccd.photon_mode},
      {"noise", "white_sigma", &c.noise.white_sigma},
      {"noise", "flicker_amp", &c.noise.flicker_amp},
      {"noise", "rw_amp", &c.noise.rw_amp},
      {"noise", "channel", &c.noise.channel},
      {"registration", "kappa", &c.registration.kappa},
      {"registration", "weighting", &c.registration.weighting},
      {"registration", "log_floor", &c.registration.log_floor},
      {"registration", "reference", &c.registration.reference},
      {"registration", "mode", &c.registration.mode},
      {"registration", "mask_saturated", &c.registration.mask_saturated},
      {"run", "frames", &c.run.frames},
      {"run", "sample_rate_hz", &c.run.sample_rate_hz},
      {"run", "n_r", &c.run.n_r},
      {"run", "seed", &c.run.seed},
      {"run", "calibration_frames", &c.run.calibration_frames},
      {"run", "shot_noise", &c.run.shot_noise},
      {"run", "calibration_shot_noise", &c.run.calibration_shot_noise},
      {"run", "propagation", &c.run.propagation},
      {"run", "save_frames", &c.run.save_frames},
      {"run", "workers", &c.run.workers},
      {"analysis", "psd_method", &c.analysis.psd_method},
      {"analysis", "psd_window", &c.analysis.psd_window},
      {"analysis", "psd_segments", &c.analysis.psd_segments},
      {"analysis", "allan_per_decade", &c.analysis.allan_per_decade},
      {"analysis", "allan_mode", &c.analysis.allan_mode},
  };
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::kFormat, "bad value '" + std::string(value) + "' for " + std::string(key));
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

template <typename T>
T to_integer(std::string_view key, std::string_view v) {
  v = trim(v);
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

void assign(const Field& f, std::string_view full_key, std::string_view value) {
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          *p = to_double(full_key, value);
        } else if constexpr (std::is_same_v<T, bool>) {
          const auto v = trim(value);
          if (v == "true" || v == "1") *p = true;
          else if (v == "false" || v == "0") *p = false;
          else bad_value(full_key, value);
        } else if constexpr (std::is_same_v<T, std::string>) {
          *p = unquote(value);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          auto v = trim(value);
          if (v.size() < 2 || v.front() != '[' || v.back() != ']') bad_value(full_key, value);
          v = trim(v.substr(1, v.size() - 2));
          p->clear();
          while (!v.empty()) {
            const auto comma = v.find(',');
            p->push_back(to_double(full_key, v.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            v = trim(v.substr(comma + 1));
          }
        } else {
          *p = to_integer<T>(full_key, value);
        }
      },
      f.slot);
}

std::string render(const Slot& slot) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(*p);
        } else if constexpr (std::is_same_v<T, bool>) {
          return *p ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return "\"" + *p + "\"";
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string s = "[";
          for (std::size_t i = 0; i < p->size(); ++i) s += (i ? ", " : "") + format_double((*p)[i]);
          return s + "]";
        } else {
          return std::to_string(*p);
        }
      },
      slot);
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

OpticalGeometry ExperimentConfig::geometry() const {
  OpticalGeometry g;
  g.wavelength = optics.wavelength_nm * 1e-9;
  g.sigma_xy = optics.sigma_xy_mm * 1e-3;
  g.d1 = optics.d1_mm * 1e-3;
  g.f_d = optics.f_d_m;
  return g;
}

SelectionConfig ExperimentConfig::selection_rad() const {
  return {deg_to_rad(selection.beta_u_deg), deg_to_rad(selection.beta_d_deg)};
}

CcdSpec ExperimentConfig::ccd_spec() const {
  CcdSpec s;
  s.rows = ccd.rows;
  s.cols = ccd.cols;
  s.pixel_pitch = ccd.pitch_um * 1e-6;
  s.bit_depth = ccd.bit_depth;
  s.quantum_efficiency = ccd.quantum_efficiency;
  s.gain = ccd.gain;
  return s;
}

NoiseBudget ExperimentConfig::noise_budget() const {
  return {noise.white_sigma, noise.flicker_amp, noise.rw_amp, parse_noise_channel(noise.channel)};
}

RegistrationOptions ExperimentConfig::registration_options() const {
  RegistrationOptions o;
  o.upsample = registration.kappa;
  o.weighting = parse_weighting(registration.weighting);
  o.log_floor = registration.log_floor;
  o.mask_saturated = registration.mask_saturated;
  o.workers = run.workers;
  return o;
}

PsdOptions ExperimentConfig::psd_options() const {
  PsdOptions o;
  o.method = parse_psd_method(analysis.psd_method);
  o.window = parse_window(analysis.psd_window);
  o.segments = analysis.psd_segments;
  return o;
}

double ExperimentConfig::omega() const { return angular_frequency(optics.wavelength_nm * 1e-9); }

double ExperimentConfig::measure_tau_as_resolved() const {
  if (delays.measure_tau_as >= 0.0) return delays.measure_tau_as;
  return tilt_to_delay(deg_to_rad(delays.measure_theta_deg), optics.n0, optics.wavelength_nm * 1e-9) / kAttosecond;
}

std::vector<double> ExperimentConfig::calibration_taus_as() const {
  std::vector<double> out;
  for (double th : delays.calibration_theta_deg)
    out.push_back(tilt_to_delay(deg_to_rad(th), optics.n0, optics.wavelength_nm * 1e-9) / kAttosecond);
  return out;
}

void ExperimentConfig::validate() const {
  geometry().validate();
  selection_rad().validate();
  ccd_spec().validate();
  noise_budget().validate();
  registration_options().validate();
  (void)psd_options();
  require(optics.n0 > 1.0, ErrorKind::kInvalidArgument, "n0 must exceed 1");
  require(run.frames >= 2, ErrorKind::kInvalidArgument, "need at least 2 frames");
  require(run.sample_rate_hz > 0.0, ErrorKind::kInvalidArgument, "sample rate must be positive");
  require(run.n_r > 0.0, ErrorKind::kInvalidArgument, "n_r must be positive");
  require(run.calibration_frames >= 1, ErrorKind::kInvalidArgument, "need at least 1 calibration frame");
  require(ccd.photon_mode == "detected" || ccd.photon_mode == "incident", ErrorKind::kInvalidArgument,
          "photon_mode must be detected or incident");
  require(run.propagation == "closed_form" || run.propagation == "numeric", ErrorKind::kInvalidArgument,
          "propagation must be closed_form or numeric");
  require(registration.mode == "image" || registration.mode == "marginal", ErrorKind::kInvalidArgument,
          "registration mode must be image or marginal");
  (void)parse_reference_policy(registration.reference);
  require(analysis.allan_mode == "overlapping" || analysis.allan_mode == "adjacent", ErrorKind::kInvalidArgument,
          "allan_mode must be overlapping or adjacent");
  require(analysis.allan_per_decade >= 1, ErrorKind::kInvalidArgument, "allan_per_decade must be >= 1");
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  const auto dot = key.find('.');
  require(dot != std::string_view::npos, ErrorKind::kUsage, "config key must be section.name: " + std::string(key));
  const auto section = key.substr(0, dot);
  const auto name = key.substr(dot + 1);
  for (const auto& f : fields(*this)) {
    if (f.section == section && f.key == name) {
      assign(f, key, value);
      return;
    }
  }
  throw Error(ErrorKind::kUsage, "unknown config key " + std::string(key));
}

std::string ExperimentConfig::serialize() const {
  auto copy = *this;
  std::string out;
  std::string_view current;
  for (const auto& f : fields(copy)) {
    if (f.section != current) {
      if (!current.empty()) out += '\n';
      out += "[" + std::string(f.section) + "]\n";
      current = f.section;
    }
    out += std::string(f.key) + " = " + render(f.slot) + "\n";
  }
  return out;
}

std::string ExperimentConfig::hash() const {
  auto copy = *this;
  copy.run.workers = 0;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(copy.serialize())));
  return buf;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text, const std::string& source) {
  ExperimentConfig c;
  std::string section;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = std::string_view(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos && line.find('"') > hash)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        require(line.back() == ']', ErrorKind::kFormat, "unterminated section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const auto eq = line.find('=');
      require(eq != std::string_view::npos, ErrorKind::kFormat, "expected key = value");
      require(!section.empty(), ErrorKind::kFormat, "key outside a section");
      c.set(section + "." + std::string(trim(line.substr(0, eq))), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.kind() == ErrorKind::kUsage ? ErrorKind::kFormat : e.kind(),
                  source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out << serialize();
}

}  // namespace wva

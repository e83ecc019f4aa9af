#include "wva/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "wva/csv.hpp"
#include "wva/error.hpp"

namespace wva {

CalibrationLine calibrate(std::span<const CalibrationPoint> points) {
  std::vector<double> taus;
  for (const auto& p : points) {
    require(std::isfinite(p.tau_as) && std::isfinite(p.mean_shift), ErrorKind::kInvalidArgument,
            "calibration points must be finite");
    taus.push_back(p.tau_as);
  }
  std::sort(taus.begin(), taus.end());
  const auto distinct = std::unique(taus.begin(), taus.end()) - taus.begin();
  require(distinct >= 2, ErrorKind::kUnderdeterminedFit, "calibration needs at least two distinct delays");

  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.tau_as;
    my += p.mean_shift;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.tau_as - mx) * (p.tau_as - mx);
    sxy += (p.tau_as - mx) * (p.mean_shift - my);
  }
  CalibrationLine line;
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  double ss = 0.0;
  for (const auto& p : points) {
    const double r = p.mean_shift - (line.slope * p.tau_as + line.intercept);
    ss += r * r;
  }
  line.residual_rms = std::sqrt(ss / n);
  line.points.assign(points.begin(), points.end());
  return line;
}

double estimate_tau(double shift, const CalibrationLine& line) {
  require(line.slope != 0.0 && std::isfinite(line.slope), ErrorKind::kDegenerateCalibration,
          "calibration slope is zero");
  return (shift - line.intercept) / line.slope;
}

std::string to_json(const CalibrationLine& line, const std::string& config_hash, unsigned long long seed,
                    bool synthetic) {
  // Numbers go through format_double so the text is reproducible byte for byte.
  auto num = [](double v) {
    return std::isfinite(v) ? nlohmann::ordered_json::parse(format_double(v)) : nlohmann::ordered_json();
  };
  nlohmann::ordered_json j;
  j["tool"] = "wva " + std::string(version());
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["data"] = synthetic ? "synthetic" : "ingested";
  j["slope"] = num(line.slope);
  j["intercept"] = num(line.intercept);
  j["residual_rms"] = num(line.residual_rms);
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : line.points) pts.push_back({{"tau_as", num(p.tau_as)}, {"mean_shift", num(p.mean_shift)}});
  j["points"] = pts;
  return j.dump(2) + "\n";
}

CalibrationLine calibration_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("calibration json: ") + e.what());
  }
  require(j.contains("slope") && j.contains("intercept"), ErrorKind::kFormat, "calibration json lacks slope/intercept");
  CalibrationLine line;
  line.slope = j["slope"].get<double>();
  line.intercept = j["intercept"].get<double>();
  line.residual_rms = j.value("residual_rms", 0.0);
  if (j.contains("points"))
    for (const auto& p : j["points"])
      line.points.push_back({p.at("tau_as").get<double>(), p.at("mean_shift").get<double>()});
  return line;
}

}  // namespace wva

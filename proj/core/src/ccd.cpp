#include "wva/ccd.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wva/error.hpp"

namespace wva {

void CcdSpec::validate() const {
  require(rows > 0 && cols > 0, ErrorKind::kInvalidArgument, "CCD extent must be positive");
  require(pixel_pitch > 0.0, ErrorKind::kInvalidArgument, "pixel pitch must be positive");
  require(quantum_efficiency > 0.0 && quantum_efficiency <= 1.0, ErrorKind::kInvalidArgument,
          "quantum efficiency must lie in (0, 1]");
  require(bit_depth == 8 || bit_depth == 12 || bit_depth == 16, ErrorKind::kInvalidArgument,
          "bit depth must be 8, 12 or 16");
  require(gain > 0.0 && std::isfinite(gain), ErrorKind::kInvalidArgument, "gain must be positive");
}

PhotonSampler::PhotonSampler(const IntensityMap& intensity, double n_r, const CcdSpec& spec,
                             PhotonBudget budget)
    : spec_(spec) {
  spec_.validate();
  require(intensity.rows() == spec.rows && intensity.cols() == spec.cols, ErrorKind::kShape,
          "intensity map does not match the CCD extent");
  require(n_r > 0.0 && std::isfinite(n_r), ErrorKind::kInvalidArgument, "photon number must be positive");

  double sum = 0.0;
  for (double v : intensity.values()) {
    require(v >= 0.0 && std::isfinite(v), ErrorKind::kInvalidArgument, "intensity must be finite and >= 0");
    sum += v;
  }
  require(sum > 0.0, ErrorKind::kEmptyIntensity, "intensity map integrates to zero");

  total_ = budget == PhotonBudget::kIncident ? n_r * spec.quantum_efficiency : n_r;
  const auto values = intensity.values();
  mean_.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mean_[i] = total_ * values[i] / sum;

  sparse_ = total_ < 4.0 * static_cast<double>(values.size());
  if (sparse_) {
    // Vose's alias method.
    const std::size_t n = values.size();
    accept_.resize(n);
    alias_.resize(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      accept_[i] = static_cast<double>(n) * values[i] / sum;
      alias_[i] = static_cast<std::uint32_t>(i);
      (accept_[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      const auto l = large.back();
      small.pop_back();
      alias_[s] = l;
      accept_[l] -= 1.0 - accept_[s];
      if (accept_[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : small) accept_[i] = 1.0;
    for (auto i : large) accept_[i] = 1.0;
  }
}

Frame PhotonSampler::expose(Rng& rng, FrameMeta meta) const {
  std::vector<std::uint32_t> electrons(mean_.size(), 0);
  if (sparse_) {
    std::poisson_distribution<std::uint64_t> total(total_);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::uint64_t n = total(rng);
    const auto pixels = static_cast<double>(accept_.size());
    for (std::uint64_t k = 0; k < n; ++k) {
      const double u = uniform(rng) * pixels;
      const auto i = std::min(static_cast<std::size_t>(u), accept_.size() - 1);
      ++electrons[u - static_cast<double>(i) < accept_[i] ? i : alias_[i]];
    }
  } else {
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      if (mean_[i] <= 0.0) continue;
      std::poisson_distribution<std::uint32_t> pixel(mean_[i]);
      electrons[i] = pixel(rng);
    }
  }

  Frame frame{spec_, meta, std::vector<std::uint16_t>(mean_.size(), 0)};
  const double sat = spec_.saturation();
  for (std::size_t i = 0; i < electrons.size(); ++i) {
    const double adu = std::round(spec_.gain * static_cast<double>(electrons[i]));
    frame.counts[i] = static_cast<std::uint16_t>(std::min(adu, sat));
  }
  return frame;
}

Frame expose(const IntensityMap& intensity, double n_r, const CcdSpec& spec, Rng& rng, PhotonBudget budget) {
  return PhotonSampler(intensity, n_r, spec, budget).expose(rng);
}

std::vector<std::int64_t> row_marginal(const Frame& frame) {
  std::vector<std::int64_t> k(frame.rows(), 0);
  for (std::size_t r = 0; r < frame.rows(); ++r)
    for (std::size_t c = 0; c < frame.cols(); ++c) k[r] += frame(r, c);
  return k;
}

double saturation_fraction(const Frame& frame) {
  if (frame.counts.empty()) return 0.0;
  const auto sat = frame.spec.saturation();
  const auto n = std::count_if(frame.counts.begin(), frame.counts.end(),
                               [sat](std::uint16_t v) { return v >= sat; });
  return static_cast<double>(n) / static_cast<double>(frame.counts.size());
}

IntensityMap to_image(const Frame& frame) {
  IntensityMap image(frame.spec.grid());
  auto out = image.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = frame.counts[i];
  return image;
}

}  // namespace wva

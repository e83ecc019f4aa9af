#include "wva/registration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wva/error.hpp"
#include "wva/fft.hpp"
#include "wva/parallel.hpp"

namespace wva {
namespace {

using RowMajorC = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double signed_frequency(std::size_t k, std::size_t n) {
  // FFT bin k as a signed frequency; the Nyquist bin of an even length maps to -n/2.
  const auto ceil_half = (n + 1) / 2;
  return k < ceil_half ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

double wrap_index(std::size_t k, std::size_t n) {
  return k > n / 2 ? static_cast<double>(k) - static_cast<double>(n) : static_cast<double>(k);
}

std::size_t patch_size(double kappa) { return static_cast<std::size_t>(std::ceil(1.5 * kappa)); }

double patch_offset(std::size_t j, std::size_t patch, double kappa) {
  return (static_cast<double>(j) - std::floor(static_cast<double>(patch) / 2.0)) / kappa;
}

// exp(+2 pi i f_k p_j / n) for the fractional patch offsets p_j.
std::vector<std::complex<double>> patch_kernel(std::size_t n, double kappa) {
  const std::size_t patch = patch_size(kappa);
  std::vector<std::complex<double>> e(patch * n);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < patch; ++j)
    for (std::size_t k = 0; k < n; ++k) e[j * n + k] = std::polar(1.0, w * signed_frequency(k, n) * patch_offset(j, patch, kappa));
  return e;
}

// exp(+2 pi i f_k d / n) for an integer shift d, reduced exactly mod n.
std::vector<std::complex<double>> integer_phase(double d, std::size_t n) {
  std::vector<std::complex<double>> e(n);
  const auto ln = static_cast<long long>(n);
  const auto ld = static_cast<long long>(d);
  for (std::size_t k = 0; k < n; ++k) {
    const long long m = ((static_cast<long long>(signed_frequency(k, n)) * ld) % ln + ln) % ln;
    e[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  }
  return e;
}

IntensityMap frame_image(const Frame& f, bool mask_saturated) {
  IntensityMap img = to_image(f);
  if (!mask_saturated) return img;
  const double sat = f.spec.saturation();
  double sum = 0.0;
  std::size_t kept = 0;
  for (double v : img.values())
    if (v < sat) {
      sum += v;
      ++kept;
    }
  const double fill = kept ? sum / static_cast<double>(kept) : 0.0;
  for (double& v : img.values())
    if (v >= sat) v = fill;
  return img;
}

}  // namespace

std::string_view to_string(Weighting w) noexcept {
  switch (w) {
    case Weighting::kLinear: return "linear";
    case Weighting::kSqrt: return "sqrt";
    case Weighting::kLogFloor: return "log";
  }
  return "linear";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "linear") return Weighting::kLinear;
  if (name == "sqrt") return Weighting::kSqrt;
  if (name == "log") return Weighting::kLogFloor;
  throw Error(ErrorKind::kInvalidArgument, "unknown weighting '" + std::string(name) + "'");
}

std::string_view to_string(ReferencePolicy p) noexcept {
  switch (p) {
    case ReferencePolicy::kFirst: return "first";
    case ReferencePolicy::kMean: return "mean";
    case ReferencePolicy::kExternal: return "model";
  }
  return "first";
}

ReferencePolicy parse_reference_policy(std::string_view name) {
  if (name == "first") return ReferencePolicy::kFirst;
  if (name == "mean") return ReferencePolicy::kMean;
  if (name == "model" || name == "external") return ReferencePolicy::kExternal;
  throw Error(ErrorKind::kInvalidArgument, "unknown reference policy '" + std::string(name) + "'");
}

void RegistrationOptions::validate() const {
  require(upsample >= 1, ErrorKind::kInvalidArgument, "upsampling factor must be >= 1");
  require(log_floor > 0.0, ErrorKind::kInvalidArgument, "log floor must be positive");
}

Registrar::Registrar(const IntensityMap& reference, const RegistrationOptions& options)
    : options_(options), rows_(reference.rows()), cols_(reference.cols()) {
  options_.validate();
  require(rows_ > 0 && cols_ > 0, ErrorKind::kShape, "empty reference image");

  std::vector<double> w(reference.values().begin(), reference.values().end());
  const double peak = *std::max_element(w.begin(), w.end());
  switch (options_.weighting) {
    case Weighting::kLinear: break;
    case Weighting::kSqrt:
      for (double& v : w) v = std::sqrt(std::max(v, 0.0));
      break;
    case Weighting::kLogFloor: {
      const double floor = options_.log_floor * peak;
      require(floor > 0.0, ErrorKind::kNoPeak, "reference has no positive signal");
      for (double& v : w) v = std::log(std::max(v, 0.0) + floor);
      break;
    }
  }
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(w.size());

  FftPlan plan(rows_, cols_);
  auto buf = plan.data();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double c = w[i] - mean;
    buf[i] = c;
    ref_energy_ += c * c;
  }
  require(ref_energy_ > 0.0, ErrorKind::kNoPeak, "reference image is constant");
  plan.forward();
  ref_conj_.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) ref_conj_[i] = std::conj(buf[i]);
  if (options_.upsample > 1) {
    patch_y_ = patch_kernel(rows_, options_.upsample);
    if (cols_ > 1) patch_x_ = patch_kernel(cols_, options_.upsample);
  }
}

ShiftEstimate Registrar::estimate(const Frame& moving) const {
  return estimate(frame_image(moving, options_.mask_saturated));
}

ShiftEstimate Registrar::estimate(const IntensityMap& moving) const {
  require(moving.rows() == rows_ && moving.cols() == cols_, ErrorKind::kShape,
          "frames differ in extent");
  const auto m = moving.values();
  double mean = 0.0;
  for (double v : m) mean += v;
  mean /= static_cast<double>(m.size());

  FftPlan plan(rows_, cols_);
  auto buf = plan.data();
  double energy = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double c = m[i] - mean;
    buf[i] = c;
    energy += c * c;
  }
  require(energy > 0.0, ErrorKind::kNoPeak, "moving image is constant");
  plan.forward();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= ref_conj_[i];
  std::vector<std::complex<double>> cps(buf.begin(), buf.end());

  plan.inverse();
  std::size_t best = 0;
  for (std::size_t i = 1; i < buf.size(); ++i)
    if (buf[i].real() > buf[best].real()) best = i;
  const double n_total = static_cast<double>(buf.size());
  const double norm = std::sqrt(ref_energy_ * energy);

  ShiftEstimate est;
  est.upsample = options_.upsample;
  est.dy = wrap_index(best / cols_, rows_);
  est.dx = wrap_index(best % cols_, cols_);
  double peak = buf[best].real() / n_total;

  if (options_.upsample > 1) {
    const double kappa = options_.upsample;
    const auto patch = static_cast<Eigen::Index>(patch_size(kappa));
    const auto rows = static_cast<Eigen::Index>(rows_), cols = static_cast<Eigen::Index>(cols_);
    const auto phy = integer_phase(est.dy, rows_);
    const auto phx = integer_phase(est.dx, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) cps[r * cols_ + c] *= phy[r] * phx[c];
    const Eigen::Map<const RowMajorC> spectrum(cps.data(), rows, cols);
    const Eigen::Map<const RowMajorC> ey(patch_y_.data(), patch, rows);
    Eigen::MatrixXcd corr;
    if (cols_ > 1) {
      const Eigen::Map<const RowMajorC> ex(patch_x_.data(), patch, cols);
      corr = (ey * spectrum) * ex.transpose();
    } else {
      corr = ey * spectrum;
    }

    Eigen::Index bj = 0, bk = 0;
    corr.real().maxCoeff(&bj, &bk);
    const auto p = static_cast<std::size_t>(patch);
    est.dy += patch_offset(static_cast<std::size_t>(bj), p, kappa);
    if (cols_ > 1) est.dx += patch_offset(static_cast<std::size_t>(bk), p, kappa);
    peak = corr(bj, bk).real() / n_total;
  }
  est.peak_value = std::clamp(peak / norm, 0.0, 1.0);
  return est;
}

ShiftEstimate register_images(const IntensityMap& reference, const IntensityMap& moving,
                              const RegistrationOptions& options) {
  require(reference.rows() == moving.rows() && reference.cols() == moving.cols(), ErrorKind::kShape,
          "frames differ in extent");
  return Registrar(reference, options).estimate(moving);
}

ShiftEstimate register_frames(const Frame& reference, const Frame& moving, const RegistrationOptions& options) {
  require(reference.rows() == moving.rows() && reference.cols() == moving.cols(), ErrorKind::kShape,
          "frames differ in extent");
  return Registrar(to_image(reference), options).estimate(moving);
}

ShiftSeries shift_series(std::span<const Frame> frames, ReferencePolicy policy, const RegistrationOptions& options,
                         const IntensityMap* external) {
  require(frames.size() >= 2, ErrorKind::kInvalidArgument, "shift series needs at least 2 frames");
  const std::size_t rows = frames[0].rows(), cols = frames[0].cols();
  for (const auto& f : frames)
    require(f.rows() == rows && f.cols() == cols, ErrorKind::kShape, "frames differ in extent");

  ShiftSeries out;
  out.estimates.resize(frames.size());
  const double dt = frames[1].meta.timestamp - frames[0].meta.timestamp;
  out.dy.dt = dt > 0.0 ? dt : 1.0;
  out.dy.start_index = static_cast<std::int64_t>(frames[0].meta.index);

  switch (policy) {
    case ReferencePolicy::kFirst:
    case ReferencePolicy::kExternal: {
      std::optional<Registrar> reg;
      if (policy == ReferencePolicy::kFirst) {
        reg.emplace(to_image(frames[0]), options);
      } else {
        require(external != nullptr, ErrorKind::kInvalidArgument, "external reference policy needs an image");
        require(external->rows() == rows && external->cols() == cols, ErrorKind::kShape,
                "reference image differs in extent");
        reg.emplace(*external, options);
      }
      parallel_for(
          frames.size(), [&](std::size_t i) { out.estimates[i] = reg->estimate(frames[i]); }, options.workers);
      break;
    }
    case ReferencePolicy::kMean: {
      std::vector<double> sum(rows * cols, 0.0);
      for (const auto& f : frames)
        for (std::size_t p = 0; p < sum.size(); ++p) sum[p] += f.counts[p];
      const double others = static_cast<double>(frames.size() - 1);
      parallel_for(
          frames.size(),
          [&](std::size_t i) {
            IntensityMap ref(frames[i].spec.grid());
            auto v = ref.values();
            for (std::size_t p = 0; p < v.size(); ++p) v[p] = (sum[p] - frames[i].counts[p]) / others;
            out.estimates[i] = Registrar(ref, options).estimate(frames[i]);
          },
          options.workers);
      break;
    }
  }
  out.dy.samples.resize(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) out.dy.samples[i] = out.estimates[i].dy;
  return out;
}

}  // namespace wva

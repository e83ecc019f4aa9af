#include "wva/diffraction.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "wva/error.hpp"
#include "wva/special_functions.hpp"
#include "wva/units.hpp"

namespace wva {
namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

double edge_weight(double y, double edge, double pitch, bool above) {
  const double tol = 1e-9 * pitch;
  if (std::abs(y - edge) <= tol) return 0.5;
  return (above ? y > edge : y < edge) ? 1.0 : 0.0;
}

void check_grid(const GridSpec& grid, const char* what) {
  require(grid.rows > 0 && grid.cols > 0 && grid.pitch > 0.0 && std::isfinite(grid.pitch),
          ErrorKind::kInvalidArgument, std::string(what) + " grid must be non-empty with positive pitch");
}

}  // namespace

double OpticalGeometry::sigma_prime() const noexcept {
  return wavelength * f_d / (std::numbers::pi * sigma_xy);
}

bool OpticalGeometry::narrow_slit_valid() const noexcept { return d1 < std::sqrt(wavelength * f_d); }

void OpticalGeometry::validate() const {
  require(wavelength > 0.0 && sigma_xy > 0.0 && f_d > 0.0 && d1 >= 0.0, ErrorKind::kInvalidArgument,
          "optical lengths must be positive");
}

GridSpec lens_grid(const OpticalGeometry& geometry, std::size_t nodes, double coverage) {
  geometry.validate();
  require(nodes >= 8 && nodes % 2 == 0, ErrorKind::kInvalidArgument, "lens grid needs an even node count");
  const double target = 2.0 * coverage * geometry.sigma_xy / static_cast<double>(nodes);
  double pitch = target;
  if (geometry.d1 > 0.0) {
    const double half_gap = geometry.d1 / 2.0;
    const double steps = std::max(1.0, std::floor(half_gap / target));
    pitch = half_gap / steps;
  }
  return {nodes, nodes, pitch};
}

std::pair<ComplexFieldGrid, ComplexFieldGrid> slit_fields(const OpticalGeometry& geometry,
                                                          const GridSpec& grid) {
  geometry.validate();
  check_grid(grid, "lens");
  const double sigma = geometry.sigma_xy;
  require(grid.pitch <= sigma / 8.0, ErrorKind::kResolution,
          "lens grid pitch exceeds sigma_xy/8");
  const double reach_y = static_cast<double>(grid.rows / 2) * grid.pitch;
  const double reach_x = static_cast<double>(grid.cols / 2) * grid.pitch;
  require(reach_y >= 4.0 * sigma && reach_x >= 4.0 * sigma, ErrorKind::kResolution,
          "lens grid must cover at least 4 sigma_xy in each direction");

  ComplexFieldGrid upper(grid);
  ComplexFieldGrid lower(grid);
  const double edge = geometry.d1 / 2.0;
  for (std::size_t r = 0; r < grid.rows; ++r) {
    const double y = grid.y(r);
    const double wu = edge_weight(y, edge, grid.pitch, true);
    const double wl = edge_weight(y, -edge, grid.pitch, false);
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const double x = grid.x(c);
      const double envelope = std::exp(-(x * x + y * y) / (sigma * sigma));
      upper(r, c) = wu * envelope;
      lower(r, c) = wl * envelope;
    }
  }
  return {std::move(upper), std::move(lower)};
}

ComplexFieldGrid propagate_numeric(const ComplexFieldGrid& field, const OpticalGeometry& geometry,
                                   const GridSpec& out) {
  geometry.validate();
  check_grid(field.spec(), "input");
  check_grid(out, "output");
  const double lf = geometry.wavelength * geometry.f_d;
  const double h = field.pitch();
  require(h <= lf / (2.0 * out.half_extent()), ErrorKind::kResolution,
          "input pitch aliases the requested output window");

  const GridSpec& in = field.spec();
  const double k = 2.0 * std::numbers::pi / lf;

  Eigen::MatrixXcd ky(static_cast<Eigen::Index>(out.rows), static_cast<Eigen::Index>(in.rows));
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < in.rows; ++j)
      ky(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::polar(1.0, k * out.y(i) * in.y(j));

  Eigen::MatrixXcd kx(static_cast<Eigen::Index>(in.cols), static_cast<Eigen::Index>(out.cols));
  for (std::size_t j = 0; j < in.cols; ++j)
    for (std::size_t i = 0; i < out.cols; ++i)
      kx(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::polar(1.0, k * in.x(j) * out.x(i));

  const auto src = field.values();
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> u(
      src.data(), static_cast<Eigen::Index>(in.rows), static_cast<Eigen::Index>(in.cols));

  const cplx prefactor = kI / lf * h * h;
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> result = prefactor * (ky * u * kx);

  std::vector<cplx> values(result.data(), result.data() + result.size());
  return {out, std::move(values)};
}

cplx closed_form_field(const OpticalGeometry& geometry, Arm arm, double x2, double y2) {
  const double sigma = geometry.sigma_xy;
  const double sp = geometry.sigma_prime();
  const double lf = geometry.wavelength * geometry.f_d;
  const double u = (arm == Arm::kUpper ? y2 : -y2) / sp;
  const double a = geometry.d1 / (2.0 * sigma);
  const double gx = std::exp(-(x2 * x2) / (sp * sp));
  // exp(-u^2) erfc(a - iu) = exp(-a^2) exp(2iau) w(u + ia); w is bounded for a >= 0.
  const cplx split = std::exp(-a * a) * std::polar(1.0, 2.0 * a * u) * faddeeva({u, a});
  return kI / lf * (std::numbers::pi * sigma * sigma / 2.0) * gx * split;
}

ComplexFieldGrid propagate_closed_form(const OpticalGeometry& geometry, Arm arm, const GridSpec& out) {
  geometry.validate();
  check_grid(out, "output");
  require(geometry.narrow_slit_valid(), ErrorKind::kApproximationDomain,
          "closed form requires d1 < sqrt(lambda f_d)");
  // The field separates in x and y; evaluate each axis once.
  std::vector<cplx> col(out.rows);
  for (std::size_t r = 0; r < out.rows; ++r) col[r] = closed_form_field(geometry, arm, 0.0, out.y(r));
  const double sp = geometry.sigma_prime();
  std::vector<double> rowx(out.cols);
  for (std::size_t c = 0; c < out.cols; ++c) rowx[c] = std::exp(-(out.x(c) * out.x(c)) / (sp * sp));

  ComplexFieldGrid field(out);
  for (std::size_t r = 0; r < out.rows; ++r)
    for (std::size_t c = 0; c < out.cols; ++c) field(r, c) = col[r] * rowx[c];
  return field;
}

AmplitudePhase erf_form(const OpticalGeometry& geometry, Arm arm, double x2, double y2) {
  const double sigma = geometry.sigma_xy;
  const double sp = geometry.sigma_prime();
  const double s = y2 / sp;
  const double f = hyp1f1_half(s);
  const double amplitude = 0.5 * sigma / sp * std::exp(-(x2 * x2 + y2 * y2) / (sigma * sigma)) *
                           std::sqrt(1.0 + 4.0 / std::numbers::pi * s * s * f * f);
  const double tilt = std::atan(2.0 / std::sqrt(std::numbers::pi) * s * f);
  const double phase = std::numbers::pi / 2.0 + (arm == Arm::kUpper ? tilt : -tilt);
  return {amplitude, phase};
}

ArmFields compute_arm_fields(const OpticalGeometry& geometry, const GridSpec& out, Propagation path,
                             std::size_t lens_nodes) {
  if (path == Propagation::kClosedForm) {
    return {propagate_closed_form(geometry, Arm::kUpper, out),
            propagate_closed_form(geometry, Arm::kLower, out)};
  }
  const GridSpec lens = lens_grid(geometry, lens_nodes);
  auto [upper, lower] = slit_fields(geometry, lens);
  return {propagate_numeric(upper, geometry, out), propagate_numeric(lower, geometry, out)};
}

IntensityMap interference_intensity(const ArmFields& fields, const SelectionConfig& selection, double tau,
                                    double omega) {
  require(fields.upper.spec() == fields.lower.spec(), ErrorKind::kShape, "arm fields differ in extent");
  const WeakValuePair aw = weak_values(selection);
  const cplx wu = std::polar(1.0 / std::abs(aw.a_w_u), omega * aw.a_w_u * tau);
  const cplx wd = std::polar(1.0 / std::abs(aw.a_w_d), omega * aw.a_w_d * tau);

  IntensityMap intensity(fields.upper.spec());
  auto out = intensity.values();
  const auto up = fields.upper.values();
  const auto lo = fields.lower.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(up[i] * wu + lo[i] * wd);
  return intensity;
}

IntensityMap interference_intensity(const OpticalGeometry& geometry, const SelectionConfig& selection,
                                    double tau, const GridSpec& out, Propagation path) {
  return interference_intensity(compute_arm_fields(geometry, out, path), selection, tau,
                                angular_frequency(geometry.wavelength));
}

}  // namespace wva

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "wva/error.hpp"

namespace wva {

/// Square-pitched sampling grid centred on the optical axis. Rows run along
/// y (the slit-split and fringe axis), columns along x. Node i sits at
/// (i - n/2) * pitch, so an even extent always contains the axis node.
struct GridSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch = 0.0;  // m

  [[nodiscard]] double y(std::size_t row) const noexcept {
    return (static_cast<double>(row) - static_cast<double>(rows / 2)) * pitch;
  }
  [[nodiscard]] double x(std::size_t col) const noexcept {
    return (static_cast<double>(col) - static_cast<double>(cols / 2)) * pitch;
  }
  /// Largest |coordinate| reached on either axis.
  [[nodiscard]] double half_extent() const noexcept {
    const auto n = rows > cols ? rows : cols;
    return static_cast<double>(n / 2) * pitch;
  }
  [[nodiscard]] std::size_t size() const noexcept { return rows * cols; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Dense row-major 2-D array tied to a GridSpec.
template <typename T>
class Grid {
 public:
  Grid() = default;
  explicit Grid(GridSpec spec, T fill = T{}) : spec_(spec), values_(spec.size(), fill) {}
  Grid(GridSpec spec, std::vector<T> values) : spec_(spec), values_(std::move(values)) {
    require(values_.size() == spec_.size(), ErrorKind::kShape, "grid data does not match its extent");
  }

  [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::size_t rows() const noexcept { return spec_.rows; }
  [[nodiscard]] std::size_t cols() const noexcept { return spec_.cols; }
  [[nodiscard]] double pitch() const noexcept { return spec_.pitch; }

  T& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * spec_.cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * spec_.cols + c]; }

  [[nodiscard]] std::span<T> values() noexcept { return values_; }
  [[nodiscard]] std::span<const T> values() const noexcept { return values_; }

 private:
  GridSpec spec_{};
  std::vector<T> values_;
};

using ComplexFieldGrid = Grid<std::complex<double>>;

/// Non-negative intensity (or any real image) on a grid.
using IntensityMap = Grid<double>;

}  // namespace wva

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace wva {

/// In-place complex FFT over an owned, FFTW-aligned buffer (1-D when
/// cols == 1, otherwise row-major 2-D). Transforms are unnormalised; an
/// inverse after a forward multiplies by size(). Plans are created with
/// FFTW_ESTIMATE so results never depend on timing measurements.
///
/// Planning is serialised internally; distinct FftPlan objects may execute
/// concurrently.
class FftPlan {
 public:
  FftPlan(std::size_t rows, std::size_t cols = 1);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& other) noexcept;
  FftPlan& operator=(FftPlan&& other) noexcept;

  [[nodiscard]] std::span<std::complex<double>> data() noexcept { return {data_, size_}; }
  [[nodiscard]] std::span<const std::complex<double>> data() const noexcept { return {data_, size_}; }
  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  void forward();
  void inverse();

 private:
  void release() noexcept;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t size_ = 0;
  std::complex<double>* data_ = nullptr;
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

}  // namespace wva

#include "wva/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>

#include "wva/error.hpp"

namespace wva {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), size_(rows * cols) {
  require(rows > 0 && cols > 0, ErrorKind::kInvalidArgument, "FFT extent must be positive");
  data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size_));
  require(data_ != nullptr, ErrorKind::kIo, "fftw_malloc failed");
  auto* buf = reinterpret_cast<fftw_complex*>(data_);

  std::lock_guard lock(planner_mutex());
  if (cols == 1) {
    forward_ = fftw_plan_dft_1d(static_cast<int>(rows), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_1d(static_cast<int>(rows), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  } else {
    forward_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, FFTW_FORWARD,
                                FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, FFTW_BACKWARD,
                                FFTW_ESTIMATE);
  }
}

FftPlan::~FftPlan() { release(); }

FftPlan::FftPlan(FftPlan&& other) noexcept
    : rows_(std::exchange(other.rows_, 0)),
      cols_(std::exchange(other.cols_, 0)),
      size_(std::exchange(other.size_, 0)),
      data_(std::exchange(other.data_, nullptr)),
      forward_(std::exchange(other.forward_, nullptr)),
      inverse_(std::exchange(other.inverse_, nullptr)) {}

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept {
  if (this != &other) {
    release();
    rows_ = std::exchange(other.rows_, 0);
    cols_ = std::exchange(other.cols_, 0);
    size_ = std::exchange(other.size_, 0);
    data_ = std::exchange(other.data_, nullptr);
    forward_ = std::exchange(other.forward_, nullptr);
    inverse_ = std::exchange(other.inverse_, nullptr);
  }
  return *this;
}

void FftPlan::forward() { fftw_execute(static_cast<fftw_plan>(forward_)); }
void FftPlan::inverse() { fftw_execute(static_cast<fftw_plan>(inverse_)); }

void FftPlan::release() noexcept {
  if (forward_ != nullptr || inverse_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    if (inverse_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  }
  if (data_ != nullptr) fftw_free(data_);
  forward_ = inverse_ = nullptr;
  data_ = nullptr;
}

}  // namespace wva

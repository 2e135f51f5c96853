#include "fracdirac/fft.hpp"

#include <mutex>
#include <utility>

#include <fftw3.h>

namespace fracdirac {
namespace {

// the FFTW planner is not thread-safe
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft2D::Fft2D(int side) : side_(side) {
  if (side < 1) throw std::invalid_argument("FFT side must be positive");
  std::lock_guard lock(planner_mutex());
  auto* buf = fftw_alloc_complex(static_cast<std::size_t>(side) * side);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_ = fftw_plan_dft_2d(side, side, buf, buf, FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft_2d(side, side, buf, buf, FFTW_BACKWARD, flags);
  fftw_free(buf);
  if (!forward_ || !backward_) throw SolverError("FFTW planning failed");
}

Fft2D::~Fft2D() {
  std::lock_guard lock(planner_mutex());
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

Fft2D::Fft2D(Fft2D&& other) noexcept
    : side_(other.side_), forward_(std::exchange(other.forward_, nullptr)),
      backward_(std::exchange(other.backward_, nullptr)) {}

Fft2D& Fft2D::operator=(Fft2D&& other) noexcept {
  std::swap(side_, other.side_);
  std::swap(forward_, other.forward_);
  std::swap(backward_, other.backward_);
  return *this;
}

void Fft2D::forward(std::span<Complex> data) const {
  if (data.size() != static_cast<std::size_t>(side_) * side_) throw std::invalid_argument("FFT size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

void Fft2D::backward(std::span<Complex> data) const {
  if (data.size() != static_cast<std::size_t>(side_) * side_) throw std::invalid_argument("FFT size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
}

}  // namespace fracdirac

#pragma once

#include <span>

#include "fracdirac/types.hpp"

namespace fracdirac {

/// Unnormalized in-place 2D DFT on a square side x side array (row-major),
/// forward sign -1. Plans are built once with FFTW_ESTIMATE | FFTW_UNALIGNED
/// so any std::vector<Complex> can be transformed.
class Fft2D {
 public:
  explicit Fft2D(int side);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;
  Fft2D(Fft2D&& other) noexcept;
  Fft2D& operator=(Fft2D&& other) noexcept;

  int side() const { return side_; }
  void forward(std::span<Complex> data) const;
  void backward(std::span<Complex> data) const;

 private:
  int side_ = 0;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

}  // namespace fracdirac

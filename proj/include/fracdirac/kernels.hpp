#pragma once

#include <span>
#include <vector>

#include "fracdirac/types.hpp"

namespace fracdirac {

/// Hot loops of the solvers. Every kernel exists twice with the same
/// signature: kernels::serial is the reference used by the tests and
/// kernels::parallel is the OpenMP version used by the solvers.
namespace kernels {

/// Square coefficient block of side 2N+1 indexed (m1 + N, m2 + N), row-major.
struct CoeffBlock {
  int radius = 0;
  std::vector<Complex> data;

  int side() const { return 2 * radius + 1; }
  Complex& at(int m1, int m2) { return data[static_cast<std::size_t>(m1 + radius) * side() + (m2 + radius)]; }
  Complex at(int m1, int m2) const { return data[static_cast<std::size_t>(m1 + radius) * side() + (m2 + radius)]; }
};

namespace serial {
// psi <- psi * exp(-i dt (phase + g |psi|^2)), pointwise
void phase_step(std::span<Complex> psi, std::span<const double> phase, double g, double dt);
// a1 <- a1 * exp(-i dt ( mass + cSelf |a1|^2 + cCross |a2|^2))
// a2 <- a2 * exp(-i dt (-mass + cCross |a1|^2 + cSelf |a2|^2))
void envelope_phase_step(std::span<Complex> a1, std::span<Complex> a2,
                         std::span<const double> mass, double cSelf, double cCross, double dt);
// f <- f * mult
void apply_multiplier(std::span<Complex> f, std::span<const Complex> mult);
// per mode (a1, a2) <- [[d, u], [l, d]] (a1, a2)
void transport_2x2(std::span<Complex> a1, std::span<Complex> a2, std::span<const double> d,
                   std::span<const Complex> u, std::span<const Complex> l);
// full linear convolution, output radius a.radius + b.radius
CoeffBlock convolve(const CoeffBlock& a, const CoeffBlock& b);
double squared_norm(std::span<const Complex> f);
}  // namespace serial

// same contracts as serial
namespace parallel {
void phase_step(std::span<Complex> psi, std::span<const double> phase, double g, double dt);
void envelope_phase_step(std::span<Complex> a1, std::span<Complex> a2,
                         std::span<const double> mass, double cSelf, double cCross, double dt);
void apply_multiplier(std::span<Complex> f, std::span<const Complex> mult);
void transport_2x2(std::span<Complex> a1, std::span<Complex> a2, std::span<const double> d,
                   std::span<const Complex> u, std::span<const Complex> l);
CoeffBlock convolve(const CoeffBlock& a, const CoeffBlock& b);
double squared_norm(std::span<const Complex> f);
}  // namespace parallel

}  // namespace kernels
}  // namespace fracdirac

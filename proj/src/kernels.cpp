#include "fracdirac/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace fracdirac::kernels {
namespace {

using Index = std::ptrdiff_t;

template <bool Par>
void phase_step_impl(std::span<Complex> psi, std::span<const double> phase, double g, double dt) {
  const Index n = static_cast<Index>(psi.size());
#pragma omp parallel for schedule(static) if (Par)
  for (Index i = 0; i < n; ++i) {
    const double arg = -dt * (phase[i] + g * std::norm(psi[i]));
    psi[i] *= Complex(std::cos(arg), std::sin(arg));
  }
}

template <bool Par>
void envelope_phase_impl(std::span<Complex> a1, std::span<Complex> a2, std::span<const double> mass,
                         double cSelf, double cCross, double dt) {
  const Index n = static_cast<Index>(a1.size());
#pragma omp parallel for schedule(static) if (Par)
  for (Index i = 0; i < n; ++i) {
    const double r1 = std::norm(a1[i]);
    const double r2 = std::norm(a2[i]);
    const double m = mass.empty() ? 0.0 : mass[i];
    a1[i] *= std::polar(1.0, -dt * (m + cSelf * r1 + cCross * r2));
    a2[i] *= std::polar(1.0, -dt * (-m + cCross * r1 + cSelf * r2));
  }
}

template <bool Par>
void multiplier_impl(std::span<Complex> f, std::span<const Complex> mult) {
  const Index n = static_cast<Index>(f.size());
#pragma omp parallel for schedule(static) if (Par)
  for (Index i = 0; i < n; ++i) f[i] *= mult[i];
}

template <bool Par>
void transport_impl(std::span<Complex> a1, std::span<Complex> a2, std::span<const double> d,
                    std::span<const Complex> u, std::span<const Complex> l) {
  const Index n = static_cast<Index>(a1.size());
#pragma omp parallel for schedule(static) if (Par)
  for (Index i = 0; i < n; ++i) {
    const Complex x = a1[i];
    const Complex y = a2[i];
    a1[i] = d[i] * x + u[i] * y;
    a2[i] = l[i] * x + d[i] * y;
  }
}

template <bool Par>
CoeffBlock convolve_impl(const CoeffBlock& a, const CoeffBlock& b) {
  CoeffBlock out;
  out.radius = a.radius + b.radius;
  out.data.assign(static_cast<std::size_t>(out.side()) * out.side(), Complex{});
  const int R = out.radius;
#pragma omp parallel for schedule(dynamic) if (Par)
  for (int s1 = -R; s1 <= R; ++s1) {
    const int lo1 = std::max(-a.radius, s1 - b.radius);
    const int hi1 = std::min(a.radius, s1 + b.radius);
    for (int s2 = -R; s2 <= R; ++s2) {
      const int lo2 = std::max(-a.radius, s2 - b.radius);
      const int hi2 = std::min(a.radius, s2 + b.radius);
      Complex acc{};
      for (int m1 = lo1; m1 <= hi1; ++m1)
        for (int m2 = lo2; m2 <= hi2; ++m2) acc += a.at(m1, m2) * b.at(s1 - m1, s2 - m2);
      out.at(s1, s2) = acc;
    }
  }
  return out;
}

template <bool Par>
double squared_norm_impl(std::span<const Complex> f) {
  const Index n = static_cast<Index>(f.size());
  double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc) if (Par)
  for (Index i = 0; i < n; ++i) acc += std::norm(f[i]);
  return acc;
}

}  // namespace

#define FRACDIRAC_KERNEL_DEFS(NS, PAR)                                                          \
  namespace NS {                                                                                \
  void phase_step(std::span<Complex> psi, std::span<const double> phase, double g, double dt) { \
    phase_step_impl<PAR>(psi, phase, g, dt);                                                    \
  }                                                                                             \
  void envelope_phase_step(std::span<Complex> a1, std::span<Complex> a2,                        \
                           std::span<const double> mass, double cSelf, double cCross,           \
                           double dt) {                                                         \
    envelope_phase_impl<PAR>(a1, a2, mass, cSelf, cCross, dt);                                  \
  }                                                                                             \
  void apply_multiplier(std::span<Complex> f, std::span<const Complex> mult) {                  \
    multiplier_impl<PAR>(f, mult);                                                              \
  }                                                                                             \
  void transport_2x2(std::span<Complex> a1, std::span<Complex> a2, std::span<const double> d,   \
                     std::span<const Complex> u, std::span<const Complex> l) {                  \
    transport_impl<PAR>(a1, a2, d, u, l);                                                       \
  }                                                                                             \
  CoeffBlock convolve(const CoeffBlock& a, const CoeffBlock& b) {                               \
    return convolve_impl<PAR>(a, b);                                                            \
  }                                                                                             \
  double squared_norm(std::span<const Complex> f) { return squared_norm_impl<PAR>(f); }         \
  }

FRACDIRAC_KERNEL_DEFS(serial, false)
FRACDIRAC_KERNEL_DEFS(parallel, true)

}  // namespace fracdirac::kernels

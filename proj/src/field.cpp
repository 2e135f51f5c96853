#include "fracdirac/field.hpp"

#include <cmath>
#include <stdexcept>

#include "fracdirac/kernels.hpp"

namespace fracdirac {

std::vector<Complex> frame_phase(const ObliqueGrid& grid, const Vec2& frame) {
  std::vector<Complex> out(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2)
      out[grid.flat(j1, j2)] = std::exp(kI * frame.dot(grid.micro_point(j1, j2)));
  return out;
}

std::vector<Complex> Field2D::physical() const {
  auto out = frame_phase(grid, frame);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= values[i];
  return out;
}

double EnvelopeState::charge() const {
  return grid.node_area() * (kernels::parallel::squared_norm(alpha1) + kernels::parallel::squared_norm(alpha2));
}

double mass(const ObliqueGrid& grid, const std::vector<Complex>& values) {
  return grid.node_area() * kernels::parallel::squared_norm(values);
}

double mass(const Field2D& f) { return mass(f.grid, f.values); }

double l2_norm(const Field2D& f) { return std::sqrt(mass(f)); }

double sobolev_weight(const Vec2& q, int s) {
  const double a = q[0] * q[0];
  const double b = q[1] * q[1];
  double total = 0.0;
  for (int order = 0; order <= s; ++order)
    for (int n1 = 0; n1 <= order; ++n1) total += std::pow(a, n1) * std::pow(b, order - n1);
  return total;
}

double weighted_hs_norm(const ObliqueGrid& grid, const Vec2& frame, const std::vector<Complex>& values, int s) {
  if (s < 0 || s > 3) throw std::invalid_argument("weighted norm order must be 0..3");
  if (values.size() != grid.size()) throw ContractError(ContractKind::GridMismatch, "field size does not match grid");
  if (s == 0) return std::sqrt(mass(grid, values));
  std::vector<Complex> hat = values;
  Fft2D(grid.side()).forward(hat);
  const double eps = grid.epsilon();
  double acc = 0.0;
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2) {
      const Vec2 q = frame + eps * grid.wavevector(j1, j2);
      acc += sobolev_weight(q, s) * std::norm(hat[grid.flat(j1, j2)]);
    }
  // Parseval for the unnormalized transform
  return std::sqrt(grid.node_area() * acc / static_cast<double>(grid.size()));
}

std::array<std::vector<Complex>, 2> spectral_gradient(const ObliqueGrid& grid, const std::vector<Complex>& values) {
  const Fft2D fft(grid.side());
  std::vector<Complex> hat = values;
  fft.forward(hat);
  std::array<std::vector<Complex>, 2> out{hat, hat};
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2) {
      const Vec2 xi = grid.wavevector(j1, j2);
      const std::size_t i = grid.flat(j1, j2);
      out[0][i] *= kI * xi[0] * inv;
      out[1][i] *= kI * xi[1] * inv;
    }
  fft.backward(out[0]);
  fft.backward(out[1]);
  return out;
}

double weighted_hs_norm(const Field2D& f, int s) { return weighted_hs_norm(f.grid, f.frame, f.values, s); }

}  // namespace fracdirac

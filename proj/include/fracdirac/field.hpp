#pragma once

#include <array>
#include <vector>

#include "fracdirac/fft.hpp"
#include "fracdirac/grid.hpp"

namespace fracdirac {

/// Complex field on an oblique periodic grid, stored in a moving frame:
/// values[j] = exp(-i frame.x_j/epsilon) psi(x_j). With frame = K a Dirac
/// wave packet becomes box-periodic for any number of cells; frame = 0 is the
/// plain field. Pointwise operations do not see the frame; spectral ones use
/// the shifted symbol frame + epsilon xi.
struct Field2D {
  ObliqueGrid grid;
  Vec2 frame = Vec2::Zero();
  double t = 0.0;
  std::vector<Complex> values;

  Field2D(const ObliqueGrid& g, const Vec2& k0) : grid(g), frame(k0), values(g.size()) {}

  /// psi(x_j) itself.
  std::vector<Complex> physical() const;
};

/// Pair of envelopes on the macroscopic grid.
struct EnvelopeState {
  ObliqueGrid grid;
  double t = 0.0;
  std::vector<Complex> alpha1, alpha2;

  explicit EnvelopeState(const ObliqueGrid& g) : grid(g), alpha1(g.size()), alpha2(g.size()) {}
  double charge() const;
};

/// Phase exp(i k0.x_j/epsilon) at node j when k0 = K: exp(2 pi i (j1 - j2)/(3n)).
std::vector<Complex> frame_phase(const ObliqueGrid& grid, const Vec2& frame);

double l2_norm(const Field2D& f);
/// integral of |f|^2 with the oblique area element
double mass(const Field2D& f);
double mass(const ObliqueGrid& grid, const std::vector<Complex>& values);

/// (sum_{|n| <= s} || (eps d)^n f ||^2)^(1/2), one term per multi-index n,
/// evaluated with the multipliers (frame + eps xi)^n. s in {0, 1, 2, 3}.
double weighted_hs_norm(const Field2D& f, int s);
double weighted_hs_norm(const ObliqueGrid& grid, const Vec2& frame, const std::vector<Complex>& values, int s);

/// Plain spectral gradient of a box-periodic field (no frame shift).
std::array<std::vector<Complex>, 2> spectral_gradient(const ObliqueGrid& grid, const std::vector<Complex>& values);

/// sum over multi-indices |n| <= s of prod_i q_i^(2 n_i)
double sobolev_weight(const Vec2& q, int s);

}  // namespace fracdirac

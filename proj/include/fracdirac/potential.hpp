#pragma once

#include <map>
#include <string>
#include <vector>

#include "fracdirac/grid.hpp"

namespace fracdirac {

struct SymmetryFlags {
  bool real = false;
  bool even = false;
  bool rotationInvariant = false;
};

/// Periodic potential V(y) = sum_m V^(m) exp(i m.k y) with finitely many terms.
struct FourierPotential {
  std::map<MillerIndex, Complex> coeffs;
  SymmetryFlags declared;

  Complex coefficient(MillerIndex m) const;
  bool empty() const { return coeffs.empty(); }
  /// max(|m1|, |m2|) over stored indices
  int support_radius() const;

  Complex evaluate(const LatticeBasis& lattice, const Vec2& y) const;
  FourierPotential scaled(double factor) const;
  /// Coefficientwise sum; declared flags are the conjunction.
  FourierPotential plus(const FourierPotential& other) const;
};

/// Cosine potential: V^ = 1 at +-(1,0), +-(0,1), +-(1,1).
FourierPotential builtin_V();
/// Sine potential: W^ = 1/(2i) at (1,0), (0,1), (-1,-1) and conjugates at the negatives.
FourierPotential builtin_W();

/// Index permutation on the dual lattice induced by R^T (no K shift):
/// R^T(m.k) = rho(m).k.
MillerIndex rotate_dual_index(const LatticeBasis& lattice, MillerIndex m);

struct HoneycombReport {
  bool real = false;
  bool even = false;
  bool odd = false;
  bool periodic = true;
  bool rotationInvariant = false;
  double realResidual = 0.0;
  double evenResidual = 0.0;
  double oddResidual = 0.0;
  double rotationResidual = 0.0;

  bool honeycomb() const { return real && even && periodic && rotationInvariant; }
};

HoneycombReport check_honeycomb(const LatticeBasis& lattice, const FourierPotential& pot,
                                double tol = 1e-14);

/// Samples V(x/epsilon) at every node of the grid (periodic per cell).
std::vector<Complex> evaluate_on_grid(const FourierPotential& pot, const ObliqueGrid& grid);

/// Macroscopic modulation kappa(x), periodized to the simulation box.
struct Modulation {
  enum class Kind { Constant, Gaussian, TanhWall };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;
  Vec2 center = Vec2::Zero();
  double width = 1.0;

  /// Gaussian: amplitude * sum over box images of exp(-|x - c|^2 / width^2).
  /// TanhWall: amplitude * tanh(L/(2 pi w) * sin(2 pi (a1 - c1))) where a1 is
  /// the fractional box coordinate along v1; this is a smooth periodic pair of
  /// walls of width ~w, the first one through the center.
  double evaluate(const Vec2& x, const LatticeBasis& lattice, double boxLength) const;
  std::vector<double> sample(const ObliqueGrid& grid) const;

  static Modulation constant(double c);
};

const char* to_string(Modulation::Kind kind);
Modulation::Kind modulation_kind_from_string(const std::string& name);

/// "honeycomb_cos" -> builtin_V, "honeycomb_sin" -> builtin_W, "zero" -> empty.
FourierPotential builtin_potential(const std::string& name);

}  // namespace fracdirac

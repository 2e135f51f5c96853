#include "fracdirac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracdirac {

Complex FourierPotential::coefficient(MillerIndex m) const {
  const auto it = coeffs.find(m);
  return it == coeffs.end() ? Complex{} : it->second;
}

int FourierPotential::support_radius() const {
  int r = 0;
  for (const auto& [m, v] : coeffs) r = std::max({r, std::abs(m.m1), std::abs(m.m2)});
  return r;
}

Complex FourierPotential::evaluate(const LatticeBasis& lattice, const Vec2& y) const {
  Complex sum{};
  for (const auto& [m, v] : coeffs) sum += v * std::exp(kI * lattice.dual(m).dot(y));
  return sum;
}

FourierPotential FourierPotential::scaled(double factor) const {
  FourierPotential out = *this;
  for (auto& [m, v] : out.coeffs) v *= factor;
  return out;
}

FourierPotential FourierPotential::plus(const FourierPotential& other) const {
  FourierPotential out = *this;
  for (const auto& [m, v] : other.coeffs) out.coeffs[m] += v;
  out.declared.real = declared.real && other.declared.real;
  out.declared.even = declared.even && other.declared.even;
  out.declared.rotationInvariant = declared.rotationInvariant && other.declared.rotationInvariant;
  return out;
}

FourierPotential builtin_V() {
  FourierPotential v;
  for (MillerIndex m : {MillerIndex{1, 0}, MillerIndex{0, 1}, MillerIndex{1, 1}}) {
    v.coeffs[m] = 1.0;
    v.coeffs[-m] = 1.0;
  }
  v.declared = {true, true, true};
  return v;
}

FourierPotential builtin_W() {
  FourierPotential w;
  const Complex c = 1.0 / (2.0 * kI);
  for (MillerIndex m : {MillerIndex{1, 0}, MillerIndex{0, 1}, MillerIndex{-1, -1}}) {
    w.coeffs[m] = c;
    w.coeffs[-m] = std::conj(c);
  }
  w.declared = {true, false, true};
  return w;
}

MillerIndex rotate_dual_index(const LatticeBasis& lattice, MillerIndex m) {
  const Mat2 Rt = lattice.R.transpose();
  const auto r = lattice.dual_index_of(Rt * lattice.dual(m));
  if (!r) throw ContractError(ContractKind::GeometryCorrupted, "R^T does not preserve the dual lattice");
  return *r;
}

HoneycombReport check_honeycomb(const LatticeBasis& lattice, const FourierPotential& pot,
                                double tol) {
  HoneycombReport rep;
  for (const auto& [m, v] : pot.coeffs) {
    const Complex partner = pot.coefficient(-m);
    rep.realResidual = std::max(rep.realResidual, std::abs(partner - std::conj(v)));
    rep.evenResidual = std::max(rep.evenResidual, std::abs(partner - v));
    rep.oddResidual = std::max(rep.oddResidual, std::abs(partner + v));
    rep.rotationResidual =
        std::max(rep.rotationResidual, std::abs(pot.coefficient(rotate_dual_index(lattice, m)) - v));
  }
  rep.real = rep.realResidual <= tol;
  rep.even = rep.evenResidual <= tol;
  rep.odd = rep.oddResidual <= tol;
  rep.rotationInvariant = rep.rotationResidual <= tol;
  return rep;
}

std::vector<Complex> evaluate_on_grid(const FourierPotential& pot, const ObliqueGrid& grid) {
  const int n = grid.points_per_cell();
  // one cell of values, then tile
  std::vector<Complex> cell(static_cast<std::size_t>(n) * n);
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      Complex sum{};
      for (const auto& [m, v] : pot.coeffs) {
        const long long phase = (static_cast<long long>(m.m1) * j1 + static_cast<long long>(m.m2) * j2) % n;
        sum += v * std::polar(1.0, 2.0 * kPi * static_cast<double>(phase) / n);
      }
      cell[static_cast<std::size_t>(j1) * n + j2] = sum;
    }
  std::vector<Complex> out(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2)
      out[grid.flat(j1, j2)] = cell[static_cast<std::size_t>(j1 % n) * n + (j2 % n)];
  return out;
}

double Modulation::evaluate(const Vec2& x, const LatticeBasis& lattice, double boxLength) const {
  switch (kind) {
    case Kind::Constant:
      return amplitude;
    case Kind::Gaussian: {
      const Vec2 e1 = boxLength * lattice.v1;
      const Vec2 e2 = boxLength * lattice.v2;
      double sum = 0.0;
      for (int p = -2; p <= 2; ++p)
        for (int q = -2; q <= 2; ++q)
          sum += std::exp(-(x - center + p * e1 + q * e2).squaredNorm() / (width * width));
      return amplitude * sum;
    }
    case Kind::TanhWall: {
      Mat2 V;
      V.col(0) = lattice.v1;
      V.col(1) = lattice.v2;
      const double a1 = (V.inverse() * (x - center))[0] / boxLength;
      return amplitude * std::tanh(boxLength / (2.0 * kPi * width) * std::sin(2.0 * kPi * a1));
    }
  }
  return 0.0;
}

std::vector<double> Modulation::sample(const ObliqueGrid& grid) const {
  std::vector<double> out(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2)
      out[grid.flat(j1, j2)] = evaluate(grid.point(j1, j2), grid.lattice(), grid.box_length());
  return out;
}

Modulation Modulation::constant(double c) {
  Modulation m;
  m.kind = Kind::Constant;
  m.amplitude = c;
  return m;
}

const char* to_string(Modulation::Kind kind) {
  switch (kind) {
    case Modulation::Kind::Constant: return "constant";
    case Modulation::Kind::Gaussian: return "gaussian";
    case Modulation::Kind::TanhWall: return "tanhWall";
  }
  return "unknown";
}

Modulation::Kind modulation_kind_from_string(const std::string& name) {
  if (name == "constant") return Modulation::Kind::Constant;
  if (name == "gaussian") return Modulation::Kind::Gaussian;
  if (name == "tanhWall") return Modulation::Kind::TanhWall;
  throw ConfigError("unknown modulation kind '" + name + "' (constant, gaussian, tanhWall)");
}

FourierPotential builtin_potential(const std::string& name) {
  if (name == "honeycomb_cos") return builtin_V();
  if (name == "honeycomb_sin") return builtin_W();
  if (name == "zero") {
    FourierPotential z;
    z.declared = {true, true, true};
    return z;
  }
  throw ConfigError("unknown builtin potential '" + name + "' (honeycomb_cos, honeycomb_sin, zero)");
}

}  // namespace fracdirac

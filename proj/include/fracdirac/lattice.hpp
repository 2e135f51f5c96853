#pragma once

#include <optional>
#include <vector>

#include "fracdirac/types.hpp"

namespace fracdirac {

/// Honeycomb (triangular Bravais) lattice with its dual, the high-symmetry
/// points K, K' and the 2*pi/3 clockwise rotation R.
///
/// Everything is derived from the two direct vectors v1 = (sqrt3/2, 1/2),
/// v2 = (sqrt3/2, -1/2); nothing else is hard-coded.
struct LatticeBasis {
  Vec2 v1, v2;
  Vec2 k1, k2;
  Vec2 K, Kprime;
  Mat2 R;
  double cellArea = 0.0;

  /// k = m1*k1 + m2*k2
  Vec2 dual(MillerIndex m) const { return m.m1 * k1 + m.m2 * k2; }
  Vec2 direct(double a1, double a2) const { return a1 * v1 + a2 * v2; }

  /// Coordinates of q in the (k1, k2) basis.
  Vec2 dual_coordinates(const Vec2& q) const;
  /// Nearest dual-lattice index to q, if q is within tol of the lattice.
  std::optional<MillerIndex> dual_index_of(const Vec2& q, double tol = 1e-9) const;
};

LatticeBasis make_honeycomb_basis();

/// Plane waves exp(i(center + m.k)·y) with |m1|, |m2| <= N, enumerated
/// row-major in (m1, m2): position = (m1 + N)(2N + 1) + (m2 + N).
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(const LatticeBasis& lattice, int truncation, Vec2 center);

  int truncation() const { return N_; }
  int side() const { return 2 * N_ + 1; }
  int size() const { return side() * side(); }
  const Vec2& center() const { return center_; }

  MillerIndex index(int pos) const { return {pos / side() - N_, pos % side() - N_}; }
  bool contains(MillerIndex m) const {
    return m.m1 >= -N_ && m.m1 <= N_ && m.m2 >= -N_ && m.m2 <= N_;
  }
  int position(MillerIndex m) const { return (m.m1 + N_) * side() + (m.m2 + N_); }

  Vec2 momentum(MillerIndex m) const { return center_ + lattice_.dual(m); }
  Vec2 momentum(int pos) const { return momentum(index(pos)); }
  const std::vector<MillerIndex>& indices() const { return indices_; }
  const LatticeBasis& lattice() const { return lattice_; }

 private:
  LatticeBasis lattice_;
  int N_;
  Vec2 center_;
  std::vector<MillerIndex> indices_;
};

/// Action of the rotation on K-centred plane-wave coefficients:
/// (R f)^(K + m.k) = f^(R^T (K + m.k)) = f^(K + image[m].k).
struct RotationIndexMap {
  /// image[pos] is the basis position of the rotated index, or -1 when the
  /// rotated index leaves the truncation (those positions are also listed in
  /// dropped).
  std::vector<int> image;
  std::vector<int> dropped;

  /// Apply the coefficient rotation; dropped entries become zero.
  CVector apply(const CVector& coeffs) const;
};

/// Requires pw centred at K; throws ContractError(GeometryCorrupted) when
/// R^T K - K is not a dual-lattice vector.
RotationIndexMap rotation_index_map(const LatticeBasis& lattice, const PlaneWaveBasis& pw);

/// Closed-form index image of m under R^T: (m2 - m1 - 1, -m1).
MillerIndex rotate_index(MillerIndex m);

/// n points linearly interpolating a -> b, endpoints included (n >= 2).
std::vector<Vec2> k_path(const Vec2& a, const Vec2& b, int n);

}  // namespace fracdirac

#pragma once

#include <cstddef>

#include "fracdirac/lattice.hpp"

namespace fracdirac {

/// Oblique periodic grid of M x M lattice cells with n points per cell edge.
/// Node (j1, j2) sits at micro coordinate y = (j1 v1 + j2 v2)/n and macro
/// coordinate x = epsilon * y. Storage index is j1 * side() + j2.
///
/// The grid is commensurate with the lattice by construction: every cell
/// holds exactly n x n nodes, so potentials sampled through x/epsilon are
/// exactly periodic.
class ObliqueGrid {
 public:
  ObliqueGrid(const LatticeBasis& lattice, int cells, int pointsPerCell, double epsilon);

  int cells() const { return M_; }
  int points_per_cell() const { return n_; }
  double epsilon() const { return eps_; }
  int side() const { return M_ * n_; }
  std::size_t size() const { return static_cast<std::size_t>(side()) * side(); }
  const LatticeBasis& lattice() const { return lattice_; }

  std::size_t flat(int j1, int j2) const {
    return static_cast<std::size_t>(j1) * side() + static_cast<std::size_t>(j2);
  }
  Vec2 micro_point(int j1, int j2) const { return (j1 * lattice_.v1 + j2 * lattice_.v2) / n_; }
  Vec2 point(int j1, int j2) const { return eps_ * micro_point(j1, j2); }

  /// Box edge length in x (|v1| = |v2| = 1).
  double box_length() const { return eps_ * M_; }
  double box_area() const { return box_length() * box_length() * lattice_.cellArea; }
  /// Area element carried by one node.
  double node_area() const { return box_area() / static_cast<double>(size()); }

  /// Signed frequency of FFT bin j on a grid of this side.
  int frequency(int j) const { return j <= side() / 2 ? j : j - side(); }
  /// Box wavevector xi = f1 b1 + f2 b2 with b_i = k_i/(epsilon M).
  Vec2 wavevector(int j1, int j2) const {
    return (frequency(j1) * lattice_.k1 + frequency(j2) * lattice_.k2) / box_length();
  }

  bool same_shape(const ObliqueGrid& o) const {
    return M_ == o.M_ && n_ == o.n_ && eps_ == o.eps_;
  }

 private:
  LatticeBasis lattice_;
  int M_;
  int n_;
  double eps_;
};

}  // namespace fracdirac

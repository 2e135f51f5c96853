#include "fracdirac/grid.hpp"

#include <stdexcept>

namespace fracdirac {

ObliqueGrid::ObliqueGrid(const LatticeBasis& lattice, int cells, int pointsPerCell, double epsilon)
    : lattice_(lattice), M_(cells), n_(pointsPerCell), eps_(epsilon) {
  if (cells < 1 || pointsPerCell < 1)
    throw ContractError(ContractKind::GridMismatch, "grid needs at least one cell and one point per cell");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

}  // namespace fracdirac

#include "fracdirac/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracdirac {

const char* to_string(ContractKind kind) {
  switch (kind) {
    case ContractKind::NoDegeneracy: return "NoDegeneracy";
    case ContractKind::NotIsolated: return "NotIsolated";
    case ContractKind::RotationEigenvalueMismatch: return "RotationEigenvalueMismatch";
    case ContractKind::DegenerateVelocity: return "DegenerateVelocity";
    case ContractKind::StructureViolation: return "StructureViolation";
    case ContractKind::FitFailure: return "FitFailure";
    case ContractKind::NyquistViolation: return "NyquistViolation";
    case ContractKind::GridMismatch: return "GridMismatch";
    case ContractKind::MissingProfiles: return "MissingProfiles";
    case ContractKind::GeometryCorrupted: return "GeometryCorrupted";
  }
  return "Unknown";
}

LatticeBasis make_honeycomb_basis() {
  LatticeBasis b;
  const double s3 = std::sqrt(3.0);
  b.v1 = Vec2(s3 / 2.0, 0.5);
  b.v2 = Vec2(s3 / 2.0, -0.5);

  // rows of V are v1, v2; K = 2*pi*V^{-T} so that v_i . k_j = 2*pi*delta_ij
  Mat2 V;
  V.row(0) = b.v1.transpose();
  V.row(1) = b.v2.transpose();
  const Mat2 dual = 2.0 * kPi * V.inverse();
  b.k1 = dual.col(0);
  b.k2 = dual.col(1);

  b.K = (b.k1 - b.k2) / 3.0;
  b.Kprime = -b.K;
  const double c = std::cos(2.0 * kPi / 3.0);
  const double s = std::sin(2.0 * kPi / 3.0);
  // clockwise rotation by 2*pi/3
  b.R << c, s, -s, c;
  b.cellArea = std::abs(V.determinant());
  return b;
}

Vec2 LatticeBasis::dual_coordinates(const Vec2& q) const {
  Mat2 B;
  B.col(0) = k1;
  B.col(1) = k2;
  return B.inverse() * q;
}

std::optional<MillerIndex> LatticeBasis::dual_index_of(const Vec2& q, double tol) const {
  const Vec2 c = dual_coordinates(q);
  const double r1 = std::round(c[0]);
  const double r2 = std::round(c[1]);
  if (std::abs(c[0] - r1) > tol || std::abs(c[1] - r2) > tol) return std::nullopt;
  return MillerIndex{static_cast<int>(r1), static_cast<int>(r2)};
}

PlaneWaveBasis::PlaneWaveBasis(const LatticeBasis& lattice, int truncation, Vec2 center)
    : lattice_(lattice), N_(truncation), center_(std::move(center)) {
  if (truncation < 1) throw std::invalid_argument("plane-wave truncation must be >= 1");
  indices_.reserve(size());
  for (int m1 = -N_; m1 <= N_; ++m1)
    for (int m2 = -N_; m2 <= N_; ++m2) indices_.push_back({m1, m2});
}

CVector RotationIndexMap::apply(const CVector& coeffs) const {
  CVector out = CVector::Zero(coeffs.size());
  for (std::size_t pos = 0; pos < image.size(); ++pos)
    if (image[pos] >= 0) out[static_cast<Eigen::Index>(pos)] = coeffs[image[pos]];
  return out;
}

MillerIndex rotate_index(MillerIndex m) { return {m.m2 - m.m1 - 1, -m.m1}; }

RotationIndexMap rotation_index_map(const LatticeBasis& lattice, const PlaneWaveBasis& pw) {
  if ((pw.center() - lattice.K).norm() > 1e-12)
    throw std::invalid_argument("rotation_index_map requires a K-centred basis");
  const Mat2 Rt = lattice.R.transpose();
  const auto shift = lattice.dual_index_of(Rt * lattice.K - lattice.K);
  if (!shift)
    throw ContractError(ContractKind::GeometryCorrupted, "R^T K - K is not on the dual lattice");
  // images of the dual basis under R^T, as integer coordinates
  const auto r1 = lattice.dual_index_of(Rt * lattice.k1);
  const auto r2 = lattice.dual_index_of(Rt * lattice.k2);
  if (!r1 || !r2)
    throw ContractError(ContractKind::GeometryCorrupted, "R^T does not preserve the dual lattice");

  RotationIndexMap map;
  map.image.assign(pw.size(), -1);
  for (int pos = 0; pos < pw.size(); ++pos) {
    const MillerIndex m = pw.index(pos);
    const MillerIndex img{shift->m1 + m.m1 * r1->m1 + m.m2 * r2->m1,
                          shift->m2 + m.m1 * r1->m2 + m.m2 * r2->m2};
    if (pw.contains(img)) {
      map.image[pos] = pw.position(img);
    } else {
      map.dropped.push_back(pos);
    }
  }
  return map;
}

std::vector<Vec2> k_path(const Vec2& a, const Vec2& b, int n) {
  if (n < 2) throw std::invalid_argument("k_path needs at least 2 points");
  std::vector<Vec2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    out.push_back((1.0 - t) * a + t * b);
  }
  out.back() = b;
  return out;
}

}  // namespace fracdirac

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fracdirac/bloch.hpp"
#include "fracdirac/kernels.hpp"

namespace fracdirac {

inline const Complex kTau = std::polar(1.0, 2.0 * kPi / 3.0);

struct DegeneratePair {
  int lower = 0;  // 0-based index of the lower band of the pair
  double E_D = 0.0;
  double gap = 0.0;
};

/// Lowest adjacent pair with |E_{b+1} - E_b| < tol max(1, |E|), isolated from
/// both neighbours by more than isolation * tol max(1, |E|).
/// Throws ContractError(NoDegeneracy / NotIsolated).
DegeneratePair find_degenerate_pair(const BlochSolution& sol, double tol = 1e-8,
                                    double isolation = 10.0);

struct ClassifiedPair {
  CVector phi1;  // rotation eigenvalue tau
  CVector phi2;  // rotation eigenvalue conj(tau)
  Complex lambda1, lambda2;
  double mismatch = 0.0;  // max distance of the eigenvalues from {tau, conj(tau)}
};

/// Diagonalizes the rotation restricted to span(subspace columns).
/// Throws ContractError(RotationEigenvalueMismatch), also for a subspace that
/// is not two-dimensional.
ClassifiedPair symmetry_classify(const CMatrix& subspace, const RotationIndexMap& rotation,
                                 double tol = 1e-6);

/// c2(m) = conj(c1(m)): coefficients of conj(Phi1(-y)).
CVector conjugate_partner(const CVector& phi1);

/// <Phi1, i p^sigma Phi2>, one entry per direction.
std::array<Complex, 2> velocity_pairing(const CVector& phi1, const CVector& phi2,
                                        const PlaneWaveBasis& pw, double sigma);

struct GaugeFixed {
  CVector phi1, phi2;
  double vF = 0.0;
  std::array<Complex, 2> rawPairing{};  // before fixing
  Complex rawC;                         // conj(rawPairing) . (1, i)
  Complex fixedC;                       // after fixing, equals -2 vF
  double phase = 0.0;                   // phi1 was multiplied by exp(i phase)
};

/// Rotates the phase of phi1 (phi2 follows as its conjugate partner) so that
/// c = conj(<Phi1, i p Phi2>) . (1, i) becomes real and negative; vF = |c|/2.
/// With this choice <Phi1, i p Phi2> = -vF (1, i), the sign under which the
/// upper cone band is ((k1 + i k2)/|k|, 1)/sqrt2 in the (Phi1, Phi2) frame.
/// Throws ContractError(DegenerateVelocity) if |c| < 1e-10.
GaugeFixed gauge_fix(const CVector& phi1, const PlaneWaveBasis& pw, double sigma);

/// Coefficients of W f.
CVector apply_potential(const PlaneWaveBasis& pw, const FourierPotential& pot, const CVector& f);

struct MassReport {
  double theta = 0.0;
  Eigen::Matrix2cd entries;  // <Phi_i, W Phi_j>
  double residual = 0.0;     // max deviation from diag(theta, -theta) incl. imaginary parts
};

/// Throws ContractError(StructureViolation) if residual > tol.
MassReport mass_coefficient(const PlaneWaveBasis& pw, const CVector& phi1, const CVector& phi2,
                            const FourierPotential& W, double tol = 1e-8);

struct CubicReport {
  double b1 = 0.0;
  double b2 = 0.0;
  std::array<Complex, 16> mu{};  // <Phi_i, conj(Phi_j) Phi_k Phi_l>, index ((i*2 + j)*2 + k)*2 + l
  double residual = 0.0;         // max |mu - structure(b1, b2)|

  Complex at(int i, int j, int k, int l) const { return mu[((i * 2 + j) * 2 + k) * 2 + l]; }
  /// (1/2)(b1 d_ij + b2 (1 - d_ij))(d_ik d_jl + d_il d_jk), 0-based indices.
  double structure(int i, int j, int k, int l) const;
};

/// All 16 quartic inner products via zero-padded coefficient convolutions.
/// Throws ContractError(StructureViolation) if residual > tol.
CubicReport cubic_coefficients(const PlaneWaveBasis& pw, const CVector& phi1, const CVector& phi2,
                               double tol = 1e-8, bool parallel = true);

/// Plane-wave coefficients as a convolution block (same layout as pw).
kernels::CoeffBlock to_block(const CVector& c, const PlaneWaveBasis& pw);

struct ConeOptions {
  int directions = 8;
  int radii = 6;
  double rMin = 1e-3;
  double rMax = 5e-2;
  double isotropyRadius = 1e-2;
};

struct ConeSamples {
  std::vector<Vec2> kappa;
  std::vector<double> lower, upper;
  std::vector<Vec2> isotropyKappa;
  std::vector<double> isotropyLower, isotropyUpper;
};

ConeSamples cone_samples(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                         int pairLow, const ConeOptions& opts = {}, bool parallel = true);

struct ConeFit {
  double slopePlus = 0.0;
  double slopeMinus = 0.0;
  double quadraticResidual = 0.0;  // max |e(kappa)|/|kappa|
  double isotropyVariation = 0.0;  // max |s_d - mean| / mean over per-direction slopes
  double isotropySpread = 0.0;     // (max - min) / mean
  std::vector<double> directionSlopes;
  double velocityMismatch = 0.0;   // |mean slope - vF| / vF
};

/// Least squares of +-(E - E_D)/|kappa| = s + a |kappa| per branch.
/// Throws ContractError(FitFailure) on non-conical data.
ConeFit cone_fit(const ConeSamples& samples, double E_D, double vF);

struct GapTable {
  std::vector<double> epsilon;
  std::vector<double> gap;
  double slope = 0.0;  // least-squares d(gap)/d(epsilon)
};

GapTable gap_opening(const PlaneWaveBasis& pw, const FourierPotential& V, const FourierPotential& W,
                     double sigma, int pairLow, const std::vector<double>& epsilons);

struct ExpansionCheck {
  std::vector<double> radius;
  std::vector<double> deviationPlus, deviationMinus;
  double constant = 0.0;  // max deviation / |kappa|
};

/// Projects the pair eigenvectors at K + kappa onto (Phi1, Phi2) and compares
/// with ((k1 + i k2)/(sqrt2 |k|), +-1/sqrt2) up to a global phase.
ExpansionCheck verify_eigenvector_expansion(const PlaneWaveBasis& pw, const FourierPotential& V,
                                            double sigma, int pairLow, const CVector& phi1,
                                            const CVector& phi2, const std::vector<Vec2>& kappas);

struct DiracOptions {
  int N = 16;
  int bandN = 12;
  int bandsAtK = 8;
  double degeneracyTol = 1e-8;
  double isolation = 10.0;
  double rotationTol = 1e-6;
  double structureTol = 1e-8;
  bool cone = true;
  ConeOptions coneOptions;
  std::vector<double> gapEpsilons;  // empty: no gap table
  bool parallel = true;
};

struct DiracPointData {
  double sigma = 2.0;
  int N = 16;
  LatticeBasis lattice;
  double E_D = 0.0;
  int pairLow = 0;
  double pairGap = 0.0;
  Complex lambda1, lambda2;
  double rotationMismatch = 0.0;
  CVector phi1, phi2;
  double vF = 0.0;
  std::array<Complex, 2> rawPairing{};
  Complex rawC;
  double theta = 0.0;
  MassReport mass;
  CubicReport cubic;
  std::optional<ConeFit> cone;
  std::optional<GapTable> gap;

  PlaneWaveBasis basis() const { return PlaneWaveBasis(lattice, N, lattice.K); }
};

/// Full pipeline at K: pair detection, classification, gauge, coefficients,
/// and optionally the cone fit and the gap table.
DiracPointData analyze_dirac_point(const LatticeBasis& lattice, const FourierPotential& V,
                                   const FourierPotential& W, double sigma,
                                   const DiracOptions& opts = {});

struct ShallowReport {
  double epsPot = 0.0;
  double sigma = 2.0;
  double E0 = 0.0;
  double E_D = 0.0, E_D_predicted = 0.0;
  double symmetric = 0.0, symmetric_predicted = 0.0;  // rotation eigenvalue 1 level
  double split = 0.0, split_predicted = 0.0;
  double vF = 0.0, vF_predicted = 0.0;
  double overlap = 0.0;  // |<Phi1, Phi1^(0)>| with the three-wave tau eigenfunction
};

/// Runs the pipeline on epsPot * V and compares with the first-order
/// three-wave asymptotics.
ShallowReport shallow_check(const LatticeBasis& lattice, const FourierPotential& V, double epsPot,
                            double sigma, int N = 12);

/// Three-wave tau eigenfunction at K in a K-centred basis:
/// (e_(0,0) + conj(tau) e_(0,1) + tau e_(-1,0))/sqrt3.
CVector three_wave_tau_state(const PlaneWaveBasis& pw);

}  // namespace fracdirac

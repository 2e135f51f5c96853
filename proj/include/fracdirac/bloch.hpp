#pragma once

#include <array>
#include <vector>

#include "fracdirac/lattice.hpp"
#include "fracdirac/potential.hpp"

namespace fracdirac {

/// H(k)[m, n] = |k + m.k|^sigma delta_mn + V^(m - n) in a plane-wave basis.
struct BlochMatrix {
  Vec2 k;
  double sigma;
  CMatrix H;
};

/// Lowest eigenpairs at one quasimomentum. Column b of eigenvectors holds the
/// coefficients of band b at momenta k + m.k, m in the basis order.
struct BlochSolution {
  Vec2 k;
  double sigma = 2.0;
  int N = 0;
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;
};

/// |q|^sigma
double fractional_symbol(const Vec2& q, double sigma);

/// Throws std::invalid_argument for sigma outside (1, 2] or a non-real potential.
BlochMatrix assemble_bloch_matrix(const PlaneWaveBasis& pw, const FourierPotential& pot,
                                  const Vec2& k, double sigma);

/// Lowest `count` eigenpairs (all of them when count == matrix size).
/// Throws SolverError when LAPACK does not converge.
BlochSolution solve_bands(const BlochMatrix& H, int count, int N = 0);
/// Eigenvalues only.
std::vector<double> solve_band_energies(const BlochMatrix& H, int count);

struct BandTable {
  std::vector<Vec2> k;
  Eigen::MatrixXd energies;  // rows: k, cols: bands
};

/// One independent solve per k. The parallel variant distributes k-points
/// over OpenMP threads; rows always come back in kList order.
BandTable band_sweep(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                     const std::vector<Vec2>& kList, int bands, bool parallel = true);

/// Coefficients of p^sigma c: i sigma |q|^(sigma - 2) q c(m), q = center + m.k.
std::array<CVector, 2> apply_p_sigma(const CVector& coeffs, const PlaneWaveBasis& pw, double sigma);

/// Matrix-free H(center) v in the basis of pw.
CVector apply_hamiltonian(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                          const CVector& v);

/// (H(K) - E_D)^{-1} restricted to the orthogonal complement of the Dirac pair,
/// built from a full eigendecomposition at K.
class ReducedResolvent {
 public:
  /// full: every eigenpair at K. pairLow: 0-based index of the lower pair band.
  /// Throws ContractError(NoDegeneracy) if the pair energies do not match E_D,
  /// ContractError(NotIsolated) if another band sits at E_D.
  ReducedResolvent(BlochSolution full, int pairLow, double E_D, CVector phi1, CVector phi2,
                   double tol = 1e-8);

  CVector apply(const CVector& f) const;
  double E_D() const { return E_D_; }
  const CVector& phi1() const { return phi1_; }
  const CVector& phi2() const { return phi2_; }

 private:
  BlochSolution full_;
  int pairLow_;
  double E_D_;
  CVector phi1_, phi2_;
  Eigen::VectorXd inverseGaps_;
};

/// || R(H t) - H(R t) || over the non-dropped indices of pw, with H applied
/// exactly (trial embedded in a larger basis so truncation does not leak in).
double commutator_check(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                        const CVector& trial);

/// Tail weight sum_{max|m_i| > r} |c(m)|^2 (ratio diagnostics for coefficient decay).
double tail_norm(const CVector& coeffs, const PlaneWaveBasis& pw, int r);

}  // namespace fracdirac

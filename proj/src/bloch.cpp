#include "fracdirac/bloch.hpp"

#include <cmath>
#include <exception>
#include <sstream>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace fracdirac {

double fractional_symbol(const Vec2& q, double sigma) { return std::pow(q.norm(), sigma); }

BlochMatrix assemble_bloch_matrix(const PlaneWaveBasis& pw, const FourierPotential& pot,
                                  const Vec2& k, double sigma) {
  if (!(sigma > 1.0 && sigma <= 2.0))
    throw std::invalid_argument("sigma must lie in (1, 2], got " + std::to_string(sigma));
  for (const auto& [m, v] : pot.coeffs)
    if (std::abs(pot.coefficient(-m) - std::conj(v)) > 1e-14)
      throw std::invalid_argument("Bloch assembly needs a real potential");

  const int n = pw.size();
  BlochMatrix out{k, sigma, CMatrix::Zero(n, n)};
  for (int p = 0; p < n; ++p) {
    const MillerIndex m = pw.index(p);
    out.H(p, p) += fractional_symbol(k + pw.lattice().dual(m), sigma);
    for (const auto& [d, v] : pot.coeffs) {
      const MillerIndex other = m - d;
      if (pw.contains(other)) out.H(p, pw.position(other)) += v;
    }
  }
  return out;
}

namespace {

[[noreturn]] void report_failure(const char* routine, lapack_int info, const CMatrix& H) {
  std::ostringstream msg;
  msg << routine << " failed with info = " << info << " (matrix size " << H.rows()
      << ", Frobenius norm " << H.norm() << ")";
  throw SolverError(msg.str());
}

}  // namespace

BlochSolution solve_bands(const BlochMatrix& H, int count, int N) {
  const lapack_int n = static_cast<lapack_int>(H.H.rows());
  if (count < 1 || count > n) throw std::invalid_argument("band count out of range");
  BlochSolution sol;
  sol.k = H.k;
  sol.sigma = H.sigma;
  sol.N = N;
  CMatrix a = H.H;
  Eigen::VectorXd w(n);
  CMatrix z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  // zheevd returned inaccurate eigenvectors for n >= 441 with the system LAPACK; MRRR is used for every range
  const char range = count == n ? 'A' : 'I';
  const lapack_int info =
      LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', range, 'U', n, a.data(), n, 0.0, 0.0, 1, count,
                     LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count) report_failure("zheevr", info, H.H);
  sol.eigenvalues.assign(w.data(), w.data() + count);
  sol.eigenvectors = std::move(z);
  return sol;
}

std::vector<double> solve_band_energies(const BlochMatrix& H, int count) {
  const lapack_int n = static_cast<lapack_int>(H.H.rows());
  if (count < 1 || count > n) throw std::invalid_argument("band count out of range");
  CMatrix a = H.H;
  Eigen::VectorXd w(n);
  lapack_int found = 0;
  lapack_int dummy = 1;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  const lapack_int info =
      LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, count,
                     LAPACKE_dlamch('S'), &found, w.data(), nullptr, dummy, support.data());
  if (info != 0 || found != count) report_failure("zheevr", info, H.H);
  return {w.data(), w.data() + count};
}

BandTable band_sweep(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                     const std::vector<Vec2>& kList, int bands, bool parallel) {
  if (kList.empty()) throw std::invalid_argument("band_sweep needs at least one k-point");
  BandTable table{kList, Eigen::MatrixXd(static_cast<Eigen::Index>(kList.size()), bands)};
  const long rows = static_cast<long>(kList.size());
  std::exception_ptr failure;
  long failedRow = -1;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long r = 0; r < rows; ++r) {
    try {
      const auto E = solve_band_energies(assemble_bloch_matrix(pw, pot, kList[r], sigma), bands);
      for (int b = 0; b < bands; ++b) table.energies(r, b) = E[b];
    } catch (...) {
#pragma omp critical(band_sweep_failure)
      if (!failure || r < failedRow) {
        failure = std::current_exception();
        failedRow = r;
      }
    }
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const SolverError& e) {
      throw SolverError("band_sweep row " + std::to_string(failedRow) + ": " + e.what());
    }
  }
  return table;
}

std::array<CVector, 2> apply_p_sigma(const CVector& coeffs, const PlaneWaveBasis& pw, double sigma) {
  std::array<CVector, 2> out{CVector(coeffs.size()), CVector(coeffs.size())};
  for (int p = 0; p < pw.size(); ++p) {
    const Vec2 q = pw.momentum(p);
    const Complex f = kI * sigma * std::pow(q.norm(), sigma - 2.0) * coeffs[p];
    out[0][p] = f * q[0];
    out[1][p] = f * q[1];
  }
  return out;
}

CVector apply_hamiltonian(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                          const CVector& v) {
  CVector out(v.size());
  for (int p = 0; p < pw.size(); ++p) {
    const MillerIndex m = pw.index(p);
    Complex acc = fractional_symbol(pw.momentum(m), sigma) * v[p];
    for (const auto& [d, c] : pot.coeffs) {
      const MillerIndex other = m - d;
      if (pw.contains(other)) acc += c * v[pw.position(other)];
    }
    out[p] = acc;
  }
  return out;
}

ReducedResolvent::ReducedResolvent(BlochSolution full, int pairLow, double E_D, CVector phi1,
                                   CVector phi2, double tol)
    : full_(std::move(full)), pairLow_(pairLow), E_D_(E_D), phi1_(std::move(phi1)), phi2_(std::move(phi2)) {
  const int n = static_cast<int>(full_.eigenvalues.size());
  if (full_.eigenvectors.cols() != n || pairLow < 0 || pairLow + 1 >= n)
    throw std::invalid_argument("reduced resolvent needs the full eigendecomposition at K");
  const double scale = tol * std::max(1.0, std::abs(E_D));
  if (std::abs(full_.eigenvalues[pairLow] - E_D) > scale ||
      std::abs(full_.eigenvalues[pairLow + 1] - E_D) > scale)
    throw ContractError(ContractKind::NoDegeneracy, "E_D does not match the selected band pair");
  inverseGaps_.resize(n);
  for (int b = 0; b < n; ++b) {
    if (b == pairLow || b == pairLow + 1) {
      inverseGaps_[b] = 0.0;
      continue;
    }
    const double gap = full_.eigenvalues[b] - E_D;
    if (std::abs(gap) < 10.0 * scale)
      throw ContractError(ContractKind::NotIsolated, "band " + std::to_string(b) + " is degenerate with E_D");
    inverseGaps_[b] = 1.0 / gap;
  }
}

CVector ReducedResolvent::apply(const CVector& f) const {
  CVector a = full_.eigenvectors.adjoint() * f;
  a.array() *= inverseGaps_.array().cast<Complex>();
  CVector u = full_.eigenvectors * a;
  u -= phi1_.dot(u) * phi1_;
  u -= phi2_.dot(u) * phi2_;
  return u;
}

double commutator_check(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                        const CVector& trial) {
  const LatticeBasis& lattice = pw.lattice();
  const int N = pw.truncation();
  const PlaneWaveBasis big(lattice, 2 * N + 1 + pot.support_radius(), pw.center());
  CVector t = CVector::Zero(big.size());
  for (int p = 0; p < pw.size(); ++p) t[big.position(pw.index(p))] = trial[p];

  const RotationIndexMap bigMap = rotation_index_map(lattice, big);
  const CVector Ht = apply_hamiltonian(big, pot, sigma, t);
  const CVector lhs = bigMap.apply(Ht);
  const CVector rhs = apply_hamiltonian(big, pot, sigma, bigMap.apply(t));

  const RotationIndexMap map = rotation_index_map(lattice, pw);
  double acc = 0.0;
  for (int p = 0; p < pw.size(); ++p) {
    if (map.image[p] < 0) continue;
    const int q = big.position(pw.index(p));
    acc += std::norm(lhs[q] - rhs[q]);
  }
  return std::sqrt(acc);
}

double tail_norm(const CVector& coeffs, const PlaneWaveBasis& pw, int r) {
  double acc = 0.0;
  for (int p = 0; p < pw.size(); ++p) {
    const MillerIndex m = pw.index(p);
    if (std::max(std::abs(m.m1), std::abs(m.m2)) > r) acc += std::norm(coeffs[p]);
  }
  return acc;
}

}  // namespace fracdirac

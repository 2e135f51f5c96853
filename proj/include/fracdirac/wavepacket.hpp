#pragma once

#include <array>
#include <vector>

#include "fracdirac/dirac.hpp"
#include "fracdirac/field.hpp"

namespace fracdirac {

/// Frame samples of Phi(y) = |Omega|^{-1/2} sum_m c_m exp(i(K + m.k).y) on
/// one cell with n x n nodes: exp(-i K.y) Phi(y) at y = (j1 v1 + j2 v2)/n,
/// stored j1 * n + j2.
std::vector<Complex> cell_profile(const PlaneWaveBasis& pw, const CVector& coeffs, int n);

struct MicroProfiles {
  int n = 0;
  std::array<std::vector<Complex>, 2> phi;
};

MicroProfiles micro_profiles(const DiracPointData& dirac, int n);

/// Periodized Gaussian amplitude * exp(-|x - center|^2 / width^2); a zero
/// amplitude gives a zero envelope.
struct EnvelopeSpec {
  Complex amplitude{0.0, 0.0};
  Vec2 center = Vec2::Zero();
  double width = 1.0;
};

EnvelopeState gaussian_envelopes(const ObliqueGrid& grid, const std::array<EnvelopeSpec, 2>& spec);

/// Fraction of spectral energy outside the quarter band |f_i| <= M/4 (M cells).
double nyquist_excess(const ObliqueGrid& grid, const std::vector<Complex>& values);
/// Throws ContractError(NyquistViolation) when either envelope exceeds tol.
void check_nyquist(const EnvelopeState& env, double tol = 1e-10);

/// Micro profiles of the first-order corrector, each obtained by the reduced
/// resolvent at (K, E_D):
///   grad[j][d] = L^{-1} p_d Phi_j,  mass[j] = L^{-1}[W Phi_j],
///   cubic[j][k][l] = L^{-1}[conj(Phi_j) Phi_k Phi_l].
struct CorrectorProfiles {
  int n = 0;
  std::array<std::array<CVector, 2>, 2> gradCoeffs;
  std::array<CVector, 2> massCoeffs;
  std::array<std::array<std::array<CVector, 2>, 2>, 2> cubicCoeffs;
  std::array<std::array<std::vector<Complex>, 2>, 2> grad;
  std::array<std::vector<Complex>, 2> mass;
  std::array<std::array<std::array<std::vector<Complex>, 2>, 2>, 2> cubic;

  bool ready() const { return n > 0 && !mass[0].empty(); }
};

/// Coefficients of conj(Phi_j) Phi_k Phi_l restricted to the basis of pw.
CVector cubic_product_coeffs(const PlaneWaveBasis& pw, const CVector& cj, const CVector& ck, const CVector& cl);

CorrectorProfiles corrector_profiles(const DiracPointData& dirac, const FourierPotential& V,
                                     const FourierPotential& W, int n);

/// Frame samples of u1 = d_d alpha_j G_jd - kappa alpha_j Q_j - mu conj(alpha_j) alpha_k alpha_l R_jkl
/// (summed), with gradients taken spectrally. Throws ContractError(MissingProfiles).
std::vector<Complex> corrector_u1(const EnvelopeState& env, const CorrectorProfiles& prof,
                                  const std::vector<double>& kappa, double mu);

/// alpha_j(x) Phi_j(x/eps) (+ eps u1 when corrector is given), in the K frame.
/// Checks the envelope band limit first.
Field2D synthesize_wavepacket(const EnvelopeState& env, const MicroProfiles& micro,
                              const std::vector<Complex>* corrector = nullptr,
                              double nyquistTol = 1e-10);

}  // namespace fracdirac

#include "fracdirac/wavepacket.hpp"

#include <cmath>
#include <cstdlib>

#include "fracdirac/kernels.hpp"

namespace fracdirac {

std::vector<Complex> cell_profile(const PlaneWaveBasis& pw, const CVector& coeffs, int n) {
  // exp(2 pi i r / n) table, indices reduced mod n
  std::vector<Complex> roots(n);
  for (int r = 0; r < n; ++r) roots[r] = std::polar(1.0, 2.0 * kPi * r / n);
  const double norm = 1.0 / std::sqrt(pw.lattice().cellArea);
  std::vector<Complex> out(static_cast<std::size_t>(n) * n);
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      Complex acc{};
      for (int p = 0; p < pw.size(); ++p) {
        const MillerIndex m = pw.index(p);
        int r = (m.m1 * j1 + m.m2 * j2) % n;
        if (r < 0) r += n;
        acc += coeffs[p] * roots[r];
      }
      out[static_cast<std::size_t>(j1) * n + j2] = norm * acc;
    }
  return out;
}

MicroProfiles micro_profiles(const DiracPointData& dirac, int n) {
  const PlaneWaveBasis pw = dirac.basis();
  return {n, {cell_profile(pw, dirac.phi1, n), cell_profile(pw, dirac.phi2, n)}};
}

EnvelopeState gaussian_envelopes(const ObliqueGrid& grid, const std::array<EnvelopeSpec, 2>& spec) {
  EnvelopeState env(grid);
  std::vector<Complex>* targets[2] = {&env.alpha1, &env.alpha2};
  for (int c = 0; c < 2; ++c) {
    if (spec[c].amplitude == Complex{}) continue;
    Modulation g;
    g.kind = Modulation::Kind::Gaussian;
    g.amplitude = 1.0;
    g.center = spec[c].center;
    g.width = spec[c].width;
    const auto shape = g.sample(grid);
    for (std::size_t i = 0; i < shape.size(); ++i) (*targets[c])[i] = spec[c].amplitude * shape[i];
  }
  return env;
}

double nyquist_excess(const ObliqueGrid& grid, const std::vector<Complex>& values) {
  std::vector<Complex> hat = values;
  Fft2D(grid.side()).forward(hat);
  const int cut = grid.cells() / 4;
  double total = 0.0, outside = 0.0;
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2) {
      const double e = std::norm(hat[grid.flat(j1, j2)]);
      total += e;
      if (std::abs(grid.frequency(j1)) > cut || std::abs(grid.frequency(j2)) > cut) outside += e;
    }
  return total > 0.0 ? outside / total : 0.0;
}

void check_nyquist(const EnvelopeState& env, double tol) {
  for (const auto* a : {&env.alpha1, &env.alpha2}) {
    const double excess = nyquist_excess(env.grid, *a);
    if (excess > tol)
      throw ContractError(ContractKind::NyquistViolation,
                          "envelope energy fraction " + std::to_string(excess) +
                              " lies outside a quarter of the cell band; widen the envelope or add cells");
  }
}

CVector cubic_product_coeffs(const PlaneWaveBasis& pw, const CVector& cj, const CVector& ck, const CVector& cl) {
  const auto P = kernels::parallel::convolve(to_block(ck, pw), to_block(cl, pw));
  const int N = pw.truncation();
  CVector out(pw.size());
  for (int p = 0; p < pw.size(); ++p) {
    const MillerIndex m = pw.index(p);
    Complex acc{};
    for (int a1 = -N; a1 <= N; ++a1)
      for (int a2 = -N; a2 <= N; ++a2)
        acc += std::conj(cj[pw.position({a1, a2})]) * P.at(m.m1 + a1, m.m2 + a2);
    out[p] = acc / pw.lattice().cellArea;
  }
  return out;
}

CorrectorProfiles corrector_profiles(const DiracPointData& dirac, const FourierPotential& V,
                                     const FourierPotential& W, int n) {
  const PlaneWaveBasis pw = dirac.basis();
  const LatticeBasis& b = dirac.lattice;
  auto full = solve_bands(assemble_bloch_matrix(pw, V, b.K, dirac.sigma), pw.size(), dirac.N);
  const ReducedResolvent L(std::move(full), dirac.pairLow, dirac.E_D, dirac.phi1, dirac.phi2);

  CorrectorProfiles out;
  out.n = n;
  const CVector* phi[2] = {&dirac.phi1, &dirac.phi2};
  for (int j = 0; j < 2; ++j) {
    const auto p = apply_p_sigma(*phi[j], pw, dirac.sigma);
    for (int d = 0; d < 2; ++d) {
      out.gradCoeffs[j][d] = L.apply(p[d]);
      out.grad[j][d] = cell_profile(pw, out.gradCoeffs[j][d], n);
    }
    out.massCoeffs[j] = L.apply(apply_potential(pw, W, *phi[j]));
    out.mass[j] = cell_profile(pw, out.massCoeffs[j], n);
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        out.cubicCoeffs[j][k][l] = L.apply(cubic_product_coeffs(pw, *phi[j], *phi[k], *phi[l]));
        out.cubic[j][k][l] = cell_profile(pw, out.cubicCoeffs[j][k][l], n);
      }
  }
  return out;
}

std::vector<Complex> corrector_u1(const EnvelopeState& env, const CorrectorProfiles& prof,
                                  const std::vector<double>& kappa, double mu) {
  if (!prof.ready()) throw ContractError(ContractKind::MissingProfiles, "corrector profiles were not computed");
  const ObliqueGrid& grid = env.grid;
  const int n = grid.points_per_cell();
  if (prof.n != n) throw ContractError(ContractKind::GridMismatch, "corrector profiles use a different cell resolution");
  if (!kappa.empty() && kappa.size() != grid.size())
    throw ContractError(ContractKind::GridMismatch, "modulation samples do not match the grid");
  const std::vector<Complex>* alpha[2] = {&env.alpha1, &env.alpha2};
  const std::array<std::array<std::vector<Complex>, 2>, 2> grad = {spectral_gradient(grid, env.alpha1),
                                                                   spectral_gradient(grid, env.alpha2)};
  std::vector<Complex> u(grid.size());
  const long side = grid.side();
#pragma omp parallel for schedule(static)
  for (long j1 = 0; j1 < side; ++j1)
    for (int j2 = 0; j2 < side; ++j2) {
      const std::size_t i = grid.flat(static_cast<int>(j1), j2);
      const std::size_t c = static_cast<std::size_t>(j1 % n) * n + (j2 % n);
      const double kap = kappa.empty() ? 0.0 : kappa[i];
      const Complex a[2] = {(*alpha[0])[i], (*alpha[1])[i]};
      Complex acc{};
      for (int j = 0; j < 2; ++j) {
        acc += grad[j][0][i] * prof.grad[j][0][c] + grad[j][1][i] * prof.grad[j][1][c];
        acc -= kap * a[j] * prof.mass[j][c];
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) acc -= mu * std::conj(a[j]) * a[k] * a[l] * prof.cubic[j][k][l][c];
      }
      u[i] = acc;
    }
  return u;
}

Field2D synthesize_wavepacket(const EnvelopeState& env, const MicroProfiles& micro,
                              const std::vector<Complex>* corrector, double nyquistTol) {
  const ObliqueGrid& grid = env.grid;
  const int n = grid.points_per_cell();
  if (micro.n != n) throw ContractError(ContractKind::GridMismatch, "micro profiles use a different cell resolution");
  check_nyquist(env, nyquistTol);
  Field2D psi(grid, grid.lattice().K);
  psi.t = env.t;
  const double eps = grid.epsilon();
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2) {
      const std::size_t i = grid.flat(j1, j2);
      const std::size_t c = static_cast<std::size_t>(j1 % n) * n + (j2 % n);
      Complex v = env.alpha1[i] * micro.phi[0][c] + env.alpha2[i] * micro.phi[1][c];
      if (corrector) v += eps * (*corrector)[i];
      psi.values[i] = v;
    }
  return psi;
}

}  // namespace fracdirac

#include "fracdirac/study.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace fracdirac {

const char* to_string(AnsatzOrder order) {
  return order == AnsatzOrder::Leading ? "leading" : "corrected";
}

int SimConfig::cells() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(boxLength > 0.0)) throw ConfigError("boxLength must be positive");
  const double m = boxLength / epsilon;
  const double r = std::round(m);
  if (r < 1.0 || std::abs(m - r) > 1e-9 * std::max(1.0, m))
    throw ConfigError("boxLength / epsilon = " + std::to_string(m) + " is not a whole number of cells");
  return static_cast<int>(r);
}

ObliqueGrid SimConfig::grid(const LatticeBasis& lattice) const {
  return ObliqueGrid(lattice, cells(), pointsPerCell, epsilon);
}

DiracParams dirac_params(const DiracPointData& dirac, const SimConfig& cfg, const std::vector<double>& kappa) {
  DiracParams p;
  p.vF = dirac.vF;
  p.theta = dirac.theta;
  p.b1 = dirac.cubic.b1;
  p.b2 = dirac.cubic.b2;
  p.mu = cfg.mu;
  p.kappa = kappa;
  return p;
}

FnlsParams fnls_params(const SimConfig& cfg, const std::vector<double>& kappa) {
  FnlsParams p;
  p.sigma = cfg.sigma;
  p.mu = cfg.mu;
  p.V = cfg.V;
  p.W = cfg.W;
  p.kappa = kappa;
  return p;
}

double approximation_error(const Field2D& psi, const EnvelopeState& env, double E_D, const MicroProfiles& micro,
                           int s, const std::vector<Complex>* corrector) {
  if (!psi.grid.same_shape(env.grid))
    throw ContractError(ContractKind::GridMismatch, "fNLS and envelope grids differ");
  const Vec2& K = psi.grid.lattice().K;
  if ((psi.frame - K).norm() > 1e-12)
    throw ContractError(ContractKind::GridMismatch, "fNLS field is not stored in the K frame");
  const Field2D ansatz = synthesize_wavepacket(env, micro, corrector, 1.0);
  const Complex phase = std::polar(1.0, -E_D * psi.t / psi.grid.epsilon());
  std::vector<Complex> diff(psi.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = psi.values[i] - phase * ansatz.values[i];
  return weighted_hs_norm(psi.grid, K, diff, s);
}

CaseResult simulate_case(const SimConfig& cfg, const DiracPointData& dirac, const MicroProfiles& micro,
                         const CorrectorProfiles* corrector, const CaseHooks& hooks) {
  if (std::abs(dirac.sigma - cfg.sigma) > 1e-14)
    throw std::invalid_argument("Dirac data was computed for a different sigma");
  const bool corrected = cfg.order == AnsatzOrder::Corrected;
  if (corrected && (!corrector || !corrector->ready()))
    throw ContractError(ContractKind::MissingProfiles, "corrected ansatz requested without corrector profiles");
  const auto start = std::chrono::steady_clock::now();

  const ObliqueGrid grid = cfg.grid(dirac.lattice);
  const auto kappa = cfg.kappa.sample(grid);
  const EnvelopeState env0 = gaussian_envelopes(grid, cfg.envelopes);
  check_nyquist(env0);

  std::vector<Complex> u0;
  if (corrected) u0 = corrector_u1(env0, *corrector, kappa, cfg.mu);
  const Field2D psi0 = synthesize_wavepacket(env0, micro, corrected ? &u0 : nullptr);

  CaseResult r;
  r.epsilon = cfg.epsilon;
  r.cells = grid.cells();
  r.order = cfg.order;
  r.initialNorm = weighted_hs_norm(psi0, cfg.s);

  EvolveOptions fo;
  fo.T = cfg.T;
  fo.dt = cfg.dtOverEpsilon * cfg.epsilon;
  fo.maxDt = cfg.maxDtOverEpsilon * cfg.epsilon;
  fo.frames = cfg.frames;
  const FnlsRun fr = evolve_fnls(psi0, fnls_params(cfg, kappa), fo, hooks.onField);

  EvolveOptions eo = fo;
  eo.dt = cfg.envelopeDt;
  eo.maxDt = 0.0;
  const DiracRun dr = evolve_dirac(env0, dirac_params(dirac, cfg, kappa), eo, hooks.onEnvelope);

  std::vector<Complex> uT;
  if (corrected) uT = corrector_u1(dr.state, *corrector, kappa, cfg.mu);
  r.error = approximation_error(fr.field, dr.state, dirac.E_D, micro, cfg.s, corrected ? &uT : nullptr);
  r.fnlsSteps = fr.steps;
  r.fnlsDt = fr.dt;
  r.massDrift = fr.maxMassDrift;
  r.chargeDrift = dr.maxChargeDrift;
  r.runtimeSec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double fit_loglog_rate(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() != err.size() || eps.size() < 2)
    throw ContractError(ContractKind::FitFailure, "rate fit needs at least two (epsilon, error) pairs");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !(err[i] > 0.0))
      throw ContractError(ContractKind::FitFailure, "rate fit needs positive epsilon and error");
    const double x = std::log(eps[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw ContractError(ContractKind::FitFailure, "all epsilon values coincide");
  return (n * sxy - sx * sy) / den;
}

ConvergenceReport convergence_study(const SimConfig& cfg, const std::vector<double>& epsilons,
                                    const std::function<void(const ConvergenceReport&)>& onCase) {
  DiracOptions dopts = cfg.dirac;
  dopts.cone = false;
  dopts.gapEpsilons.clear();
  const DiracPointData dirac = analyze_dirac_point(make_honeycomb_basis(), cfg.V, cfg.W, cfg.sigma, dopts);
  const MicroProfiles micro = micro_profiles(dirac, cfg.pointsPerCell);
  std::optional<CorrectorProfiles> corr;
  if (cfg.order == AnsatzOrder::Corrected) corr = corrector_profiles(dirac, cfg.V, cfg.W, cfg.pointsPerCell);

  ConvergenceReport report;
  std::vector<double> e, err;
  for (const double eps : epsilons) {
    SimConfig c = cfg;
    c.epsilon = eps;
    c.frames = 0;
    report.cases.push_back(simulate_case(c, dirac, micro, corr ? &*corr : nullptr));
    e.push_back(eps);
    err.push_back(report.cases.back().error);
    if (e.size() >= 2) report.fittedRate = fit_loglog_rate(e, err);
    if (onCase) onCase(report);
  }
  return report;
}

namespace {

// frame samples of the p-sigma profile and of |K + m.k|^sigma applied to the profile
std::vector<Complex> symbol_profile(const PlaneWaveBasis& pw, const CVector& c, double sigma, int n) {
  CVector out(c.size());
  for (int p = 0; p < pw.size(); ++p) out[p] = fractional_symbol(pw.momentum(p), sigma) * c[p];
  return cell_profile(pw, out, n);
}

}  // namespace

ProductRuleResult product_rule_check(const ObliqueGrid& grid, const EnvelopeSpec& gamma, const PlaneWaveBasis& pw,
                                     const CVector& psiFull, double sigma, int s) {
  const Vec2& K = grid.lattice().K;
  if ((pw.center() - K).norm() > 1e-12) throw std::invalid_argument("product rule check needs a K-centred basis");
  const int n = grid.points_per_cell();
  const double eps = grid.epsilon();

  const EnvelopeState g = gaussian_envelopes(grid, {gamma, EnvelopeSpec{}});
  const std::vector<Complex>& G = g.alpha1;
  // modes the cell grid cannot resolve would alias; drop them from Psi
  CVector psi = psiFull;
  for (int p = 0; p < pw.size(); ++p) {
    const MillerIndex m = pw.index(p);
    if (2 * std::abs(m.m1) >= n || 2 * std::abs(m.m2) >= n) psi[p] = 0.0;
  }
  const auto prof = cell_profile(pw, psi, n);
  const auto lifted = symbol_profile(pw, psi, sigma, n);
  const auto p = apply_p_sigma(psi, pw, sigma);
  const std::array<std::vector<Complex>, 2> pprof = {cell_profile(pw, p[0], n), cell_profile(pw, p[1], n)};
  const auto dG = spectral_gradient(grid, G);

  // (-eps^2 Lap)^(sigma/2) of Gamma Psi(./eps), in the K frame
  std::vector<Complex> A(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2)
      A[grid.flat(j1, j2)] = G[grid.flat(j1, j2)] * prof[static_cast<std::size_t>(j1 % n) * n + j2 % n];
  const Fft2D fft(grid.side());
  fft.forward(A);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2)
      A[grid.flat(j1, j2)] *= inv * fractional_symbol(K + eps * grid.wavevector(j1, j2), sigma);
  fft.backward(A);

  std::vector<Complex> q(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2) {
      const std::size_t i = grid.flat(j1, j2);
      const std::size_t c = static_cast<std::size_t>(j1 % n) * n + j2 % n;
      q[i] = A[i] - G[i] * lifted[c] + eps * (dG[0][i] * pprof[0][c] + dG[1][i] * pprof[1][c]);
    }

  ProductRuleResult out;
  out.epsilon = eps;
  out.residual = weighted_hs_norm(grid, K, q, s);
  if (std::abs(sigma - 2.0) < 1e-14) {
    const auto d11 = spectral_gradient(grid, dG[0]);
    const auto d22 = spectral_gradient(grid, dG[1]);
    std::vector<Complex> diff(grid.size());
    for (int j1 = 0; j1 < grid.side(); ++j1)
      for (int j2 = 0; j2 < grid.side(); ++j2) {
        const std::size_t i = grid.flat(j1, j2);
        const std::size_t c = static_cast<std::size_t>(j1 % n) * n + j2 % n;
        const Complex lap = d11[0][i] + d22[1][i];
        diff[i] = q[i] + eps * eps * lap * prof[c];
      }
    out.leibnizError = weighted_hs_norm(grid, K, diff, s);
  }
  return out;
}

}  // namespace fracdirac

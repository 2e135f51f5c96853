#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracdirac/dynamics.hpp"
#include "fracdirac/wavepacket.hpp"

namespace fracdirac {

enum class AnsatzOrder { Leading, Corrected };
const char* to_string(AnsatzOrder order);

/// Everything needed to run one two-scale simulation at a given epsilon.
struct SimConfig {
  double sigma = 2.0;
  double epsilon = 0.1;
  double mu = 1.0;
  FourierPotential V = builtin_V();
  FourierPotential W = builtin_W();
  Modulation kappa;
  /// macroscopic box edge; cells per side M = boxLength/epsilon must be an integer
  double boxLength = 3.6;
  int pointsPerCell = 8;
  /// fNLS step dt = dtOverEpsilon * epsilon, capped at maxDtOverEpsilon * epsilon
  double dtOverEpsilon = 2e-3;
  double maxDtOverEpsilon = 5e-3;
  double envelopeDt = 1e-3;
  double T = 0.5;
  int s = 1;
  int frames = 0;
  std::array<EnvelopeSpec, 2> envelopes;
  AnsatzOrder order = AnsatzOrder::Leading;
  DiracOptions dirac;

  /// Throws ConfigError when boxLength/epsilon is not an integer.
  int cells() const;
  ObliqueGrid grid(const LatticeBasis& lattice) const;
};

DiracParams dirac_params(const DiracPointData& dirac, const SimConfig& cfg, const std::vector<double>& kappa);
FnlsParams fnls_params(const SimConfig& cfg, const std::vector<double>& kappa);

/// || psi - exp(-i E_D t/eps) ansatz(env) ||_{H^s_eps}; the ansatz includes
/// eps u1 when a corrector is supplied. Throws ContractError(GridMismatch).
double approximation_error(const Field2D& psi, const EnvelopeState& env, double E_D, const MicroProfiles& micro,
                           int s, const std::vector<Complex>* corrector = nullptr);

struct CaseResult {
  double epsilon = 0.0;
  int cells = 0;
  AnsatzOrder order = AnsatzOrder::Leading;
  double error = 0.0;
  double initialNorm = 0.0;  // H^s_eps norm of the initial fNLS data
  double runtimeSec = 0.0;
  int fnlsSteps = 0;
  double fnlsDt = 0.0;
  double massDrift = 0.0;
  double chargeDrift = 0.0;
};

/// Optional hooks for snapshots of a single run.
struct CaseHooks {
  FieldCallback onField;
  EnvelopeCallback onEnvelope;
};

/// Builds initial data for cfg.order, evolves fNLS and the envelope system to
/// cfg.T and measures the approximation error. Corrector profiles are only
/// needed for the corrected order.
CaseResult simulate_case(const SimConfig& cfg, const DiracPointData& dirac, const MicroProfiles& micro,
                         const CorrectorProfiles* corrector, const CaseHooks& hooks = {});

struct ConvergenceReport {
  std::vector<CaseResult> cases;
  double fittedRate = 0.0;
};

/// Least-squares slope of log(error) against log(epsilon).
double fit_loglog_rate(const std::vector<double>& eps, const std::vector<double>& err);

/// Runs simulate_case for every epsilon (cfg.epsilon is overridden). The
/// callback sees the partial report after each case so callers can persist it.
ConvergenceReport convergence_study(const SimConfig& cfg, const std::vector<double>& epsilons,
                                    const std::function<void(const ConvergenceReport&)>& onCase = {});

struct ProductRuleResult {
  double epsilon = 0.0;
  double residual = 0.0;       // || q^sigma ||_{H^s_eps}
  double leibnizError = -1.0;  // sigma = 2 only: || q - (-eps^2 Lap Gamma) Psi ||
};

/// q = (-eps^2 Lap)^(sigma/2)(Gamma Psi(./eps)) - Gamma (-eps^2 Lap)^(sigma/2) Psi(./eps)
///     + eps grad Gamma . p^sigma Psi(./eps)
/// with Gamma a periodized Gaussian on the grid and Psi given by K-centred coefficients.
ProductRuleResult product_rule_check(const ObliqueGrid& grid, const EnvelopeSpec& gamma, const PlaneWaveBasis& pw,
                                     const CVector& psi, double sigma, int s);

}  // namespace fracdirac

#include <cmath>
#include <string>

#include "fracdirac/dynamics.hpp"
#include "fracdirac/kernels.hpp"
#include "step_plan.hpp"

namespace fracdirac {

DiracStepper::DiracStepper(const ObliqueGrid& grid, const DiracParams& params, double dt, bool parallel)
    : fft_(grid.side()), diag_(grid.size()), upper_(grid.size()), lower_(grid.size()),
      cSelf_(params.mu * params.b1), cCross_(params.mu * params.b2), dt_(dt), parallel_(parallel) {
  if (!params.kappa.empty()) {
    if (params.kappa.size() != grid.size())
      throw ContractError(ContractKind::GridMismatch, "modulation samples do not match the grid");
    mass_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) mass_[i] = params.theta * params.kappa[i];
  }
  // exp(-dt A), A = [[0, vF(i xi1 - xi2)], [vF(i xi1 + xi2), 0]], A^2 = -(vF|xi|)^2
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2) {
      const std::size_t i = grid.flat(j1, j2);
      const Vec2 xi = grid.wavevector(j1, j2);
      const double w = params.vF * xi.norm();
      const double c = std::cos(w * dt);
      // sin(w dt)/w -> dt as w -> 0
      const double sinc = w == 0.0 ? dt : std::sin(w * dt) / w;
      diag_[i] = inv * c;
      upper_[i] = -inv * sinc * params.vF * Complex(-xi[1], xi[0]);
      lower_[i] = -inv * sinc * params.vF * Complex(xi[1], xi[0]);
    }
}

void DiracStepper::step(std::vector<Complex>& a1, std::vector<Complex>& a2) const {
  const double h = 0.5 * dt_;
  if (parallel_) {
    kernels::parallel::envelope_phase_step(a1, a2, mass_, cSelf_, cCross_, h);
    fft_.forward(a1);
    fft_.forward(a2);
    kernels::parallel::transport_2x2(a1, a2, diag_, upper_, lower_);
    fft_.backward(a1);
    fft_.backward(a2);
    kernels::parallel::envelope_phase_step(a1, a2, mass_, cSelf_, cCross_, h);
  } else {
    kernels::serial::envelope_phase_step(a1, a2, mass_, cSelf_, cCross_, h);
    fft_.forward(a1);
    fft_.forward(a2);
    kernels::serial::transport_2x2(a1, a2, diag_, upper_, lower_);
    fft_.backward(a1);
    fft_.backward(a2);
    kernels::serial::envelope_phase_step(a1, a2, mass_, cSelf_, cCross_, h);
  }
}

DiracRun evolve_dirac(EnvelopeState env0, const DiracParams& params, const EvolveOptions& opts,
                      const EnvelopeCallback& onFrame) {
  const detail::StepPlan plan = detail::plan_steps(opts, "dirac");
  DiracRun run{std::move(env0)};
  run.dt = plan.dt;
  run.chargeInitial = run.state.charge();
  if (plan.steps == 0) return run;
  const DiracStepper stepper(run.state.grid, params, plan.dt, opts.parallel);
  const double t0 = run.state.t;
  for (int s = 1; s <= plan.steps; ++s) {
    stepper.step(run.state.alpha1, run.state.alpha2);
    run.state.t = t0 + s * plan.dt;
    const bool frameEnd = s % plan.perFrame == 0;
    if (s % opts.checkEvery == 0 || frameEnd) {
      const double q = run.state.charge();
      if (!std::isfinite(q))
        throw SolverError("dirac: non-finite envelope at step " + std::to_string(s) + " (frame " +
                          std::to_string((s - 1) / plan.perFrame) + ")");
      if (run.chargeInitial > 0.0)
        run.maxChargeDrift = std::max(run.maxChargeDrift, std::abs(q - run.chargeInitial) / run.chargeInitial);
    }
    if (frameEnd && opts.frames > 0 && onFrame) onFrame(s / plan.perFrame, run.state);
  }
  run.steps = plan.steps;
  return run;
}

}  // namespace fracdirac

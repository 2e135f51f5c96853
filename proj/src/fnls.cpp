#include "fracdirac/dynamics.hpp"

#include <cmath>
#include <string>

#include "fracdirac/kernels.hpp"
#include "step_plan.hpp"

namespace fracdirac {

FnlsStepper::FnlsStepper(const ObliqueGrid& grid, const Vec2& frame, const FnlsParams& params,
                         double dt, bool parallel)
    : fft_(grid.side()), phase_(grid.size()), multiplier_(grid.size()), mu_(params.mu), dt_(dt),
      parallel_(parallel) {
  if (!params.kappa.empty() && params.kappa.size() != grid.size())
    throw ContractError(ContractKind::GridMismatch, "modulation samples do not match the grid");
  const double eps = grid.epsilon();
  const auto V = evaluate_on_grid(params.V, grid);
  const auto W = evaluate_on_grid(params.W, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double kap = params.kappa.empty() ? 0.0 : params.kappa[i];
    phase_[i] = V[i].real() / eps + kap * W[i].real();
  }
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (int j1 = 0; j1 < grid.side(); ++j1)
    for (int j2 = 0; j2 < grid.side(); ++j2) {
      const Vec2 q = frame + eps * grid.wavevector(j1, j2);
      multiplier_[grid.flat(j1, j2)] = std::polar(inv, -dt * std::pow(q.norm(), params.sigma) / eps);
    }
}

void FnlsStepper::step(std::vector<Complex>& values) const {
  if (parallel_) {
    kernels::parallel::phase_step(values, phase_, mu_, 0.5 * dt_);
    fft_.forward(values);
    kernels::parallel::apply_multiplier(values, multiplier_);
    fft_.backward(values);
    kernels::parallel::phase_step(values, phase_, mu_, 0.5 * dt_);
  } else {
    kernels::serial::phase_step(values, phase_, mu_, 0.5 * dt_);
    fft_.forward(values);
    kernels::serial::apply_multiplier(values, multiplier_);
    fft_.backward(values);
    kernels::serial::phase_step(values, phase_, mu_, 0.5 * dt_);
  }
}


FnlsRun evolve_fnls(Field2D psi0, const FnlsParams& params, const EvolveOptions& opts,
                    const FieldCallback& onFrame) {
  const detail::StepPlan plan = detail::plan_steps(opts, "fnls");
  FnlsRun run{std::move(psi0)};
  run.dt = plan.dt;
  run.massInitial = mass(run.field);
  if (plan.steps == 0) return run;
  const FnlsStepper stepper(run.field.grid, run.field.frame, params, plan.dt, opts.parallel);
  const double t0 = run.field.t;
  for (int s = 1; s <= plan.steps; ++s) {
    stepper.step(run.field.values);
    run.field.t = t0 + s * plan.dt;
    const bool frameEnd = s % plan.perFrame == 0;
    if (s % opts.checkEvery == 0 || frameEnd) {
      const double m = mass(run.field);
      if (!std::isfinite(m))
        throw SolverError("fnls: non-finite field at step " + std::to_string(s) + " (frame " +
                          std::to_string((s - 1) / plan.perFrame) + ")");
      if (run.massInitial > 0.0)
        run.maxMassDrift = std::max(run.maxMassDrift, std::abs(m - run.massInitial) / run.massInitial);
    }
    if (frameEnd && opts.frames > 0 && onFrame) onFrame(s / plan.perFrame, run.field);
  }
  run.steps = plan.steps;
  return run;
}

}  // namespace fracdirac

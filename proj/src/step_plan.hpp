#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "fracdirac/dynamics.hpp"

namespace fracdirac::detail {

// Uniform steps hitting T exactly, a whole number of steps per frame.
struct StepPlan {
  int steps = 0;
  int perFrame = 0;
  double dt = 0.0;
};

inline StepPlan plan_steps(const EvolveOptions& opts, const char* who) {
  if (!(opts.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (opts.T < 0.0 && !opts.allowBackward) throw std::invalid_argument("final time must be non-negative");
  double dt = opts.dt;
  if (opts.maxDt > 0.0 && dt > opts.maxDt) {
    std::clog << "[" << who << "] time step " << dt << " exceeds the accuracy cap " << opts.maxDt
              << "; reduced\n";
    dt = opts.maxDt;
  }
  const int frames = std::max(1, opts.frames);
  const double span = std::abs(opts.T);
  const int perFrame = std::max(1, static_cast<int>(std::ceil(span / (frames * dt) - 1e-9)));
  StepPlan p;
  p.steps = span == 0.0 ? 0 : perFrame * frames;
  p.perFrame = perFrame;
  p.dt = p.steps == 0 ? dt : opts.T / p.steps;
  return p;
}


}  // namespace fracdirac::detail

#pragma once

#include <functional>
#include <vector>

#include "fracdirac/field.hpp"
#include "fracdirac/potential.hpp"

namespace fracdirac {

/// i d_t psi = eps^-1 (-eps^2 Lap)^(sigma/2) psi + eps^-1 V(x/eps) psi + kappa(x) W(x/eps) psi + mu |psi|^2 psi
struct FnlsParams {
  double sigma = 2.0;
  double mu = 0.0;
  FourierPotential V;
  FourierPotential W;
  std::vector<double> kappa;  // grid samples; empty means kappa = 0
};

/// One Strang step: half pointwise phase, exact fractional multiplier in the
/// field's frame, half pointwise phase. Owns its FFT plans and tables.
class FnlsStepper {
 public:
  FnlsStepper(const ObliqueGrid& grid, const Vec2& frame, const FnlsParams& params, double dt,
              bool parallel = true);
  void step(std::vector<Complex>& values) const;
  double dt() const { return dt_; }

 private:
  Fft2D fft_;
  std::vector<double> phase_;
  std::vector<Complex> multiplier_;
  double mu_;
  double dt_;
  bool parallel_;
};

/// d_t a1 + vF (d1 + i d2) a2 + i theta kappa a1 + i mu (b1|a1|^2 + b2|a2|^2) a1 = 0
/// d_t a2 + vF (d1 - i d2) a1 - i theta kappa a2 + i mu (b2|a1|^2 + b1|a2|^2) a2 = 0
struct DiracParams {
  double vF = 1.0;
  double theta = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double mu = 0.0;
  std::vector<double> kappa;
};

/// Strang step: half pointwise phase rotation, exact 2x2 transport per mode,
/// half pointwise phase rotation.
class DiracStepper {
 public:
  DiracStepper(const ObliqueGrid& grid, const DiracParams& params, double dt, bool parallel = true);
  void step(std::vector<Complex>& a1, std::vector<Complex>& a2) const;
  double dt() const { return dt_; }

 private:
  Fft2D fft_;
  std::vector<double> mass_;
  std::vector<double> diag_;
  std::vector<Complex> upper_, lower_;
  double cSelf_, cCross_;
  double dt_;
  bool parallel_;
};

struct EvolveOptions {
  double T = 1.0;
  double dt = 1e-3;
  /// requested dt above maxDt is reduced (and logged); <= 0 disables the cap
  double maxDt = 0.0;
  /// snapshots at T * i / frames, i = 1..frames (0: none)
  int frames = 0;
  /// mass/NaN check interval in steps
  int checkEvery = 10;
  bool parallel = true;
  /// allow negative T (backward in time) for reversibility checks
  bool allowBackward = false;
};

struct FnlsRun {
  Field2D field;
  int steps = 0;
  double dt = 0.0;
  double massInitial = 0.0;
  double maxMassDrift = 0.0;  // relative
};

using FieldCallback = std::function<void(int frame, const Field2D&)>;

/// Throws SolverError on non-finite values (with the step and frame index).
FnlsRun evolve_fnls(Field2D psi0, const FnlsParams& params, const EvolveOptions& opts,
                    const FieldCallback& onFrame = {});

struct DiracRun {
  EnvelopeState state;
  int steps = 0;
  double dt = 0.0;
  double chargeInitial = 0.0;
  double maxChargeDrift = 0.0;
};

using EnvelopeCallback = std::function<void(int frame, const EnvelopeState&)>;

DiracRun evolve_dirac(EnvelopeState env0, const DiracParams& params, const EvolveOptions& opts,
                      const EnvelopeCallback& onFrame = {});

}  // namespace fracdirac

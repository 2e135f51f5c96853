#include "fracdirac/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace fracdirac {

DegeneratePair find_degenerate_pair(const BlochSolution& sol, double tol, double isolation) {
  const auto& E = sol.eigenvalues;
  const int n = static_cast<int>(E.size());
  for (int b = 0; b + 1 < n; ++b) {
    const double scale = tol * std::max(1.0, std::abs(E[b]));
    const double gap = E[b + 1] - E[b];
    if (gap >= scale) continue;
    const bool belowOk = b == 0 || E[b] - E[b - 1] > isolation * scale;
    if (b + 2 >= n)
      throw ContractError(ContractKind::NotIsolated,
                          "degenerate pair at the top of the computed spectrum; request more bands");
    const bool aboveOk = E[b + 2] - E[b + 1] > isolation * scale;
    if (!belowOk || !aboveOk)
      throw ContractError(ContractKind::NotIsolated,
                          "bands " + std::to_string(b + 1) + "," + std::to_string(b + 2) +
                              " are degenerate but a neighbouring band is too close");
    return {b, 0.5 * (E[b] + E[b + 1]), gap};
  }
  throw ContractError(ContractKind::NoDegeneracy, "no adjacent pair within tolerance");
}

ClassifiedPair symmetry_classify(const CMatrix& subspace, const RotationIndexMap& rotation, double tol) {
  if (subspace.cols() != 2)
    throw ContractError(ContractKind::RotationEigenvalueMismatch,
                        "symmetry classification needs a two-dimensional subspace, got " +
                            std::to_string(subspace.cols()));
  CMatrix rotated(subspace.rows(), 2);
  for (int c = 0; c < 2; ++c) rotated.col(c) = rotation.apply(subspace.col(c));
  const Eigen::Matrix2cd Rsub = subspace.adjoint() * rotated;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(Rsub);
  const auto& lam = es.eigenvalues();
  // pick the eigenvalue closest to tau as the first one
  const int first = std::abs(lam[0] - kTau) <= std::abs(lam[1] - kTau) ? 0 : 1;
  ClassifiedPair out;
  out.lambda1 = lam[first];
  out.lambda2 = lam[1 - first];
  out.mismatch = std::max(std::abs(out.lambda1 - kTau), std::abs(out.lambda2 - std::conj(kTau)));
  if (out.mismatch > tol)
    throw ContractError(ContractKind::RotationEigenvalueMismatch,
                        "rotation eigenvalues deviate from {tau, conj(tau)} by " + std::to_string(out.mismatch));
  out.phi1 = (subspace * es.eigenvectors().col(first)).normalized();
  out.phi2 = (subspace * es.eigenvectors().col(1 - first)).normalized();
  return out;
}

CVector conjugate_partner(const CVector& phi1) { return phi1.conjugate(); }

std::array<Complex, 2> velocity_pairing(const CVector& phi1, const CVector& phi2,
                                        const PlaneWaveBasis& pw, double sigma) {
  const auto p = apply_p_sigma(phi2, pw, sigma);
  return {kI * phi1.dot(p[0]), kI * phi1.dot(p[1])};
}

namespace {

Complex pairing_contraction(const std::array<Complex, 2>& P) {
  return std::conj(P[0]) + kI * std::conj(P[1]);
}

}  // namespace

GaugeFixed gauge_fix(const CVector& phi1, const PlaneWaveBasis& pw, double sigma) {
  GaugeFixed out;
  out.rawPairing = velocity_pairing(phi1, conjugate_partner(phi1), pw, sigma);
  out.rawC = pairing_contraction(out.rawPairing);
  if (std::abs(out.rawC) < 1e-10)
    throw ContractError(ContractKind::DegenerateVelocity, "velocity pairing vanishes");
  // phi1 -> exp(i t) phi1 turns c into exp(2 i t) c
  out.phase = 0.5 * (kPi - std::arg(out.rawC));
  out.phi1 = std::polar(1.0, out.phase) * phi1;
  out.phi2 = conjugate_partner(out.phi1);
  out.fixedC = pairing_contraction(velocity_pairing(out.phi1, out.phi2, pw, sigma));
  out.vF = 0.5 * std::abs(out.fixedC);
  return out;
}

CVector apply_potential(const PlaneWaveBasis& pw, const FourierPotential& pot, const CVector& f) {
  CVector out = CVector::Zero(f.size());
  for (int p = 0; p < pw.size(); ++p) {
    const MillerIndex m = pw.index(p);
    Complex acc{};
    for (const auto& [d, c] : pot.coeffs) {
      const MillerIndex other = m - d;
      if (pw.contains(other)) acc += c * f[pw.position(other)];
    }
    out[p] = acc;
  }
  return out;
}

MassReport mass_coefficient(const PlaneWaveBasis& pw, const CVector& phi1, const CVector& phi2,
                            const FourierPotential& W, double tol) {
  MassReport rep;
  const CVector* phis[2] = {&phi1, &phi2};
  for (int j = 0; j < 2; ++j) {
    const CVector Wphi = apply_potential(pw, W, *phis[j]);
    for (int i = 0; i < 2; ++i) rep.entries(i, j) = phis[i]->dot(Wphi);
  }
  rep.theta = rep.entries(0, 0).real();
  rep.residual = std::max({std::abs(rep.entries(0, 0).imag()), std::abs(rep.entries(1, 1) + rep.theta),
                           std::abs(rep.entries(0, 1)), std::abs(rep.entries(1, 0))});
  if (rep.residual > tol)
    throw ContractError(ContractKind::StructureViolation,
                        "mass matrix deviates from diag(theta, -theta) by " + std::to_string(rep.residual));
  return rep;
}

kernels::CoeffBlock to_block(const CVector& c, const PlaneWaveBasis& pw) {
  kernels::CoeffBlock b;
  b.radius = pw.truncation();
  b.data.assign(c.data(), c.data() + c.size());
  return b;
}

double CubicReport::structure(int i, int j, int k, int l) const {
  const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  return 0.5 * (b1 * d(i, j) + b2 * (1.0 - d(i, j))) * (d(i, k) * d(j, l) + d(i, l) * d(j, k));
}

CubicReport cubic_coefficients(const PlaneWaveBasis& pw, const CVector& phi1, const CVector& phi2,
                               double tol, bool parallel) {
  const auto conv = parallel ? kernels::parallel::convolve : kernels::serial::convolve;
  const kernels::CoeffBlock c[2] = {to_block(phi1, pw), to_block(phi2, pw)};
  // products Phi_a Phi_b, exact on the padded range
  kernels::CoeffBlock P[2][2];
  P[0][0] = conv(c[0], c[0]);
  P[0][1] = conv(c[0], c[1]);
  P[1][0] = P[0][1];
  P[1][1] = conv(c[1], c[1]);
  const double invArea = 1.0 / pw.lattice().cellArea;

  CubicReport rep;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const auto& a = P[i][j].data;
          const auto& b = P[k][l].data;
          Complex acc{};
          for (std::size_t s = 0; s < a.size(); ++s) acc += std::conj(a[s]) * b[s];
          rep.mu[((i * 2 + j) * 2 + k) * 2 + l] = invArea * acc;
        }
  rep.b1 = 0.5 * (rep.at(0, 0, 0, 0).real() + rep.at(1, 1, 1, 1).real());
  rep.b2 = 0.5 * (rep.at(0, 1, 0, 1).real() + rep.at(0, 1, 1, 0).real() + rep.at(1, 0, 0, 1).real() +
                  rep.at(1, 0, 1, 0).real());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          rep.residual = std::max(rep.residual, std::abs(rep.at(i, j, k, l) - rep.structure(i, j, k, l)));
  if (rep.residual > tol)
    throw ContractError(ContractKind::StructureViolation,
                        "cubic tensor deviates from the (b1, b2) structure by " + std::to_string(rep.residual));
  return rep;
}

ConeSamples cone_samples(const PlaneWaveBasis& pw, const FourierPotential& pot, double sigma,
                         int pairLow, const ConeOptions& opts, bool parallel) {
  const Vec2 K = pw.lattice().K;
  std::vector<Vec2> ks;
  ConeSamples s;
  for (int d = 0; d < opts.directions; ++d) {
    const double a = 2.0 * kPi * d / opts.directions;
    const Vec2 dir(std::cos(a), std::sin(a));
    for (int r = 0; r < opts.radii; ++r) {
      const double t = opts.radii == 1 ? 0.0 : static_cast<double>(r) / (opts.radii - 1);
      const double rad = opts.rMin * std::pow(opts.rMax / opts.rMin, t);
      s.kappa.push_back(rad * dir);
    }
    s.isotropyKappa.push_back(opts.isotropyRadius * dir);
  }
  for (const auto& q : s.kappa) ks.push_back(K + q);
  for (const auto& q : s.isotropyKappa) ks.push_back(K + q);
  const BandTable t = band_sweep(pw, pot, sigma, ks, pairLow + 2, parallel);
  const std::size_t nk = s.kappa.size();
  for (std::size_t r = 0; r < ks.size(); ++r) {
    const double lo = t.energies(static_cast<Eigen::Index>(r), pairLow);
    const double hi = t.energies(static_cast<Eigen::Index>(r), pairLow + 1);
    if (r < nk) {
      s.lower.push_back(lo);
      s.upper.push_back(hi);
    } else {
      s.isotropyLower.push_back(lo);
      s.isotropyUpper.push_back(hi);
    }
  }
  return s;
}

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace

ConeFit cone_fit(const ConeSamples& s, double E_D, double vF) {
  if (s.kappa.size() < 2 || s.isotropyKappa.empty())
    throw ContractError(ContractKind::FitFailure, "not enough cone samples");
  std::vector<double> r, yp, ym;
  for (std::size_t i = 0; i < s.kappa.size(); ++i) {
    const double rad = s.kappa[i].norm();
    r.push_back(rad);
    yp.push_back((s.upper[i] - E_D) / rad);
    ym.push_back((E_D - s.lower[i]) / rad);
  }
  const LineFit fp = fit_line(r, yp);
  const LineFit fm = fit_line(r, ym);
  ConeFit out;
  out.slopePlus = fp.intercept;
  out.slopeMinus = fm.intercept;
  if (!(out.slopePlus > 0.0 && out.slopeMinus > 0.0))
    throw ContractError(ContractKind::FitFailure, "cone slopes are not positive");
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.quadraticResidual = std::max(out.quadraticResidual, std::abs(yp[i] / out.slopePlus - 1.0) / r[i]);
    out.quadraticResidual = std::max(out.quadraticResidual, std::abs(ym[i] / out.slopeMinus - 1.0) / r[i]);
  }
  if (std::abs(out.slopePlus - out.slopeMinus) > 0.2 * std::max(out.slopePlus, out.slopeMinus))
    throw ContractError(ContractKind::FitFailure, "upper and lower cone slopes disagree");
  for (std::size_t d = 0; d < s.isotropyKappa.size(); ++d)
    out.directionSlopes.push_back((s.isotropyUpper[d] - s.isotropyLower[d]) / (2.0 * s.isotropyKappa[d].norm()));
  const auto [mn, mx] = std::minmax_element(out.directionSlopes.begin(), out.directionSlopes.end());
  const double mean = std::accumulate(out.directionSlopes.begin(), out.directionSlopes.end(), 0.0) /
                      static_cast<double>(out.directionSlopes.size());
  out.isotropySpread = (*mx - *mn) / mean;
  for (double v : out.directionSlopes)
    out.isotropyVariation = std::max(out.isotropyVariation, std::abs(v - mean) / mean);
  if (vF > 0.0) out.velocityMismatch = std::abs(0.5 * (out.slopePlus + out.slopeMinus) - vF) / vF;
  return out;
}

GapTable gap_opening(const PlaneWaveBasis& pw, const FourierPotential& V, const FourierPotential& W,
                     double sigma, int pairLow, const std::vector<double>& epsilons) {
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] > epsilons[i - 1])) throw std::invalid_argument("gap epsilons must increase");
  GapTable t;
  t.epsilon = epsilons;
  for (double e : epsilons) {
    const auto E = solve_band_energies(assemble_bloch_matrix(pw, V.plus(W.scaled(e)), pw.lattice().K, sigma),
                                       pairLow + 2);
    t.gap.push_back(E[pairLow + 1] - E[pairLow]);
  }
  if (epsilons.size() >= 2) t.slope = fit_line(t.epsilon, t.gap).slope;
  return t;
}

ExpansionCheck verify_eigenvector_expansion(const PlaneWaveBasis& pw, const FourierPotential& V,
                                            double sigma, int pairLow, const CVector& phi1,
                                            const CVector& phi2, const std::vector<Vec2>& kappas) {
  ExpansionCheck out;
  const Vec2 K = pw.lattice().K;
  for (const Vec2& q : kappas) {
    const double rad = q.norm();
    const auto sol = solve_bands(assemble_bloch_matrix(pw, V, K + q, sigma), pairLow + 2);
    const Complex first = Complex(q[0], q[1]) / (std::sqrt(2.0) * rad);
    double dev[2];
    for (int branch = 0; branch < 2; ++branch) {
      const CVector e = sol.eigenvectors.col(pairLow + branch);
      const Eigen::Vector2cd a(phi1.dot(e), phi2.dot(e));
      const double sign = branch == 1 ? 1.0 : -1.0;
      const Eigen::Vector2cd target(first, sign / std::sqrt(2.0));
      // distance after the best global phase
      dev[branch] = std::sqrt(std::max(0.0, a.squaredNorm() + 1.0 - 2.0 * std::abs(target.dot(a))));
    }
    out.radius.push_back(rad);
    out.deviationMinus.push_back(dev[0]);
    out.deviationPlus.push_back(dev[1]);
    out.constant = std::max(out.constant, std::max(dev[0], dev[1]) / rad);
  }
  return out;
}

DiracPointData analyze_dirac_point(const LatticeBasis& lattice, const FourierPotential& V,
                                   const FourierPotential& W, double sigma, const DiracOptions& opts) {
  DiracPointData d;
  d.sigma = sigma;
  d.N = opts.N;
  d.lattice = lattice;
  const PlaneWaveBasis pw(lattice, opts.N, lattice.K);
  const BlochMatrix H = assemble_bloch_matrix(pw, V, lattice.K, sigma);
  const BlochSolution sol = solve_bands(H, std::min(opts.bandsAtK, pw.size()), opts.N);
  const DegeneratePair pair = find_degenerate_pair(sol, opts.degeneracyTol, opts.isolation);
  d.E_D = pair.E_D;
  d.pairLow = pair.lower;
  d.pairGap = pair.gap;

  const RotationIndexMap rot = rotation_index_map(lattice, pw);
  const ClassifiedPair cls = symmetry_classify(sol.eigenvectors.middleCols(pair.lower, 2), rot, opts.rotationTol);
  d.lambda1 = cls.lambda1;
  d.lambda2 = cls.lambda2;
  d.rotationMismatch = cls.mismatch;

  const GaugeFixed g = gauge_fix(cls.phi1, pw, sigma);
  d.phi1 = g.phi1;
  d.phi2 = g.phi2;
  d.vF = g.vF;
  d.rawPairing = g.rawPairing;
  d.rawC = g.rawC;

  d.mass = mass_coefficient(pw, d.phi1, d.phi2, W, opts.structureTol);
  d.theta = d.mass.theta;
  d.cubic = cubic_coefficients(pw, d.phi1, d.phi2, opts.structureTol, opts.parallel);

  if (opts.cone) {
    const PlaneWaveBasis bandPw(lattice, opts.bandN, lattice.K);
    d.cone = cone_fit(cone_samples(bandPw, V, sigma, d.pairLow, opts.coneOptions, opts.parallel), d.E_D, d.vF);
  }
  if (!opts.gapEpsilons.empty()) d.gap = gap_opening(pw, V, W, sigma, d.pairLow, opts.gapEpsilons);
  return d;
}

CVector three_wave_tau_state(const PlaneWaveBasis& pw) {
  CVector c = CVector::Zero(pw.size());
  const double s = 1.0 / std::sqrt(3.0);
  c[pw.position({0, 0})] = s;
  c[pw.position({0, 1})] = s * std::conj(kTau);
  c[pw.position({-1, 0})] = s * kTau;
  return c;
}

ShallowReport shallow_check(const LatticeBasis& lattice, const FourierPotential& V, double epsPot,
                            double sigma, int N) {
  if (!(epsPot > 0.0)) throw std::invalid_argument("shallow check needs a positive potential scale");
  ShallowReport rep;
  rep.epsPot = epsPot;
  rep.sigma = sigma;
  rep.E0 = std::pow(lattice.K.norm(), sigma);
  const Complex v00 = V.coefficient({0, 0});
  const Complex v01 = V.coefficient({0, 1});
  rep.E_D_predicted = rep.E0 + epsPot * (v00 - v01).real();
  rep.symmetric_predicted = rep.E0 + epsPot * (v00 + 2.0 * v01).real();
  rep.split_predicted = rep.symmetric_predicted - rep.E_D_predicted;
  rep.vF_predicted = 0.5 * sigma * std::pow(lattice.K.norm(), sigma - 1.0);

  DiracOptions opts;
  opts.N = N;
  opts.cone = false;
  FourierPotential zero;
  const FourierPotential scaled = V.scaled(epsPot);
  const DiracPointData d = analyze_dirac_point(lattice, scaled, zero, sigma, opts);
  rep.E_D = d.E_D;
  rep.vF = d.vF;

  const PlaneWaveBasis pw(lattice, N, lattice.K);
  rep.overlap = std::abs(three_wave_tau_state(pw).dot(d.phi1));

  // the remaining member of the three-wave cluster carries rotation eigenvalue 1
  const auto sol = solve_bands(assemble_bloch_matrix(pw, scaled, lattice.K, sigma), 3, N);
  const RotationIndexMap rot = rotation_index_map(lattice, pw);
  int symmetricBand = -1;
  for (int b = 0; b < 3; ++b) {
    if (b == d.pairLow || b == d.pairLow + 1) continue;
    const CVector e = sol.eigenvectors.col(b);
    if (std::abs(e.dot(rot.apply(e)) - 1.0) < 1e-6) symmetricBand = b;
  }
  if (symmetricBand < 0)
    throw ContractError(ContractKind::RotationEigenvalueMismatch, "no rotation-symmetric level in the three-wave cluster");
  rep.symmetric = sol.eigenvalues[symmetricBand];
  rep.split = rep.symmetric - rep.E_D;
  return rep;
}

}  // namespace fracdirac

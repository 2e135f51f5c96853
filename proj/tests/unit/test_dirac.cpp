#include <doctest.h>

#include <cmath>
#include <random>

#include "fracdirac/dirac.hpp"

using namespace fracdirac;

namespace {

struct Fixture {
  LatticeBasis b = make_honeycomb_basis();
  PlaneWaveBasis pw{b, 10, b.K};
  FourierPotential V = builtin_V();
};

// Phi(y) = |Omega|^{-1/2} sum c_m exp(i(K + m.k).y) on an n x n cell grid
std::vector<Complex> sample_cell(const PlaneWaveBasis& pw, const CVector& c, int n) {
  const auto& b = pw.lattice();
  std::vector<Complex> out(static_cast<std::size_t>(n) * n);
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      const Vec2 y = (j1 * b.v1 + j2 * b.v2) / n;
      Complex acc{};
      for (int p = 0; p < pw.size(); ++p) acc += c[p] * std::exp(kI * pw.momentum(p).dot(y));
      out[static_cast<std::size_t>(j1) * n + j2] = acc / std::sqrt(b.cellArea);
    }
  return out;
}

}  // namespace

TEST_CASE("degenerate pair detection") {
  Fixture f;
  const auto sol = solve_bands(assemble_bloch_matrix(f.pw, f.V, f.b.K, 2.0), 6);
  const auto pair = find_degenerate_pair(sol);
  CHECK(pair.lower == 0);
  CHECK(pair.gap < 1e-8 * pair.E_D);
  const auto free = solve_bands(assemble_bloch_matrix(f.pw, FourierPotential{}, f.b.K, 2.0), 6);
  try {
    find_degenerate_pair(free);
    FAIL("expected NotIsolated");
  } catch (const ContractError& e) {
    CHECK(e.kind() == ContractKind::NotIsolated);
  }
  const auto generic = solve_bands(assemble_bloch_matrix(f.pw, f.V, f.b.K + Vec2(0.2, 0.1), 2.0), 4);
  try {
    find_degenerate_pair(generic);
    FAIL("expected NoDegeneracy");
  } catch (const ContractError& e) {
    CHECK(e.kind() == ContractKind::NoDegeneracy);
  }
}

TEST_CASE("rotation classification and conjugate partner") {
  Fixture f;
  const double sigma = 1.6;
  const auto sol = solve_bands(assemble_bloch_matrix(f.pw, f.V, f.b.K, sigma), 6);
  const auto pair = find_degenerate_pair(sol);
  const auto rot = rotation_index_map(f.b, f.pw);
  const auto cls = symmetry_classify(sol.eigenvectors.middleCols(pair.lower, 2), rot);
  CHECK(std::abs(cls.lambda1 - kTau) < 1e-8);
  CHECK(std::abs(cls.lambda2 - std::conj(kTau)) < 1e-8);
  CHECK_THROWS_AS(symmetry_classify(sol.eigenvectors.middleCols(0, 1), rot), ContractError);

  const CVector phi2 = conjugate_partner(cls.phi1);
  const CVector res = apply_hamiltonian(f.pw, f.V, sigma, phi2) - pair.E_D * phi2;
  CHECK(res.norm() < 1e-9);
  CHECK((rot.apply(phi2) - std::conj(kTau) * phi2).norm() < 1e-8);
  CHECK(std::abs(cls.phi1.dot(phi2)) < 1e-10);
  CHECK((conjugate_partner(phi2) - cls.phi1).norm() == 0.0);
  const CVector real = CVector::Constant(4, Complex(0.5, 0.0));
  CHECK((conjugate_partner(real) - real).norm() == 0.0);

  // three-wave state carries tau as well
  const CVector t = three_wave_tau_state(f.pw);
  CHECK((rot.apply(t) - kTau * t).norm() < 1e-14);
}

TEST_CASE("gauge fixing") {
  Fixture f;
  const double sigma = 2.0;
  const auto sol = solve_bands(assemble_bloch_matrix(f.pw, f.V, f.b.K, sigma), 6);
  const auto rot = rotation_index_map(f.b, f.pw);
  const auto cls = symmetry_classify(sol.eigenvectors.middleCols(0, 2), rot);
  const auto g = gauge_fix(cls.phi1, f.pw, sigma);
  CHECK(g.vF > 0.0);
  CHECK(std::abs(g.rawC) == doctest::Approx(2.0 * g.vF).epsilon(1e-12));
  CHECK(std::abs(g.fixedC + 2.0 * g.vF) < 1e-12);
  const auto P = velocity_pairing(g.phi1, g.phi2, f.pw, sigma);
  CHECK(std::abs(P[0] + g.vF) < 1e-10);
  CHECK(std::abs(P[1] + kI * g.vF) < 1e-10);

  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int i = 0; i < 3; ++i) {
    const auto g2 = gauge_fix(std::polar(1.0, u(gen)) * cls.phi1, f.pw, sigma);
    CHECK(g2.vF == doctest::Approx(g.vF).epsilon(1e-12));
    // the fixed eigenfunction is unique up to a sign
    CHECK(std::min((g2.phi1 - g.phi1).norm(), (g2.phi1 + g.phi1).norm()) < 1e-10);
  }
}

TEST_CASE("mass and cubic coefficients") {
  Fixture f;
  const double sigma = 2.0;
  DiracOptions opts;
  opts.N = 8;
  opts.cone = false;
  const auto d = analyze_dirac_point(f.b, f.V, builtin_W(), sigma, opts);
  const PlaneWaveBasis pw = d.basis();

  const auto zeroMass = mass_coefficient(pw, d.phi1, d.phi2, FourierPotential{});
  CHECK(zeroMass.theta == 0.0);
  CHECK(zeroMass.entries.norm() == 0.0);
  CHECK(std::abs(d.mass.entries(0, 1)) < 1e-8);
  CHECK(std::abs(d.mass.entries(1, 0)) < 1e-8);
  CHECK(std::abs(d.mass.entries(1, 1).real() + d.theta) < 1e-8);
  CHECK(std::abs(d.theta) > 1e-3);

  CHECK(d.cubic.at(0, 0, 0, 0).real() == doctest::Approx(d.cubic.b1).epsilon(1e-10));
  CHECK(d.cubic.at(0, 1, 0, 1).real() == doctest::Approx(0.5 * d.cubic.b2).epsilon(1e-10));
  CHECK(std::abs(d.cubic.at(0, 0, 0, 1)) < 1e-8);
  CHECK(d.cubic.residual < 1e-8);

  // quadrature oracle: |Phi|^4 has frequencies up to 4N, so n > 4N points is exact
  const int n = 4 * pw.truncation() + 2;
  const auto s1 = sample_cell(pw, d.phi1, n);
  const auto s2 = sample_cell(pw, d.phi2, n);
  const double w = f.b.cellArea / (n * n);
  double b1 = 0.0, b2 = 0.0, norm1 = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    b1 += w * std::norm(s1[i]) * std::norm(s1[i]);
    b2 += 2.0 * w * std::norm(s1[i]) * std::norm(s2[i]);
    norm1 += w * std::norm(s1[i]);
  }
  CHECK(norm1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.cubic.b1 == doctest::Approx(b1).epsilon(1e-10));
  CHECK(d.cubic.b2 == doctest::Approx(b2).epsilon(1e-10));

  // serial and parallel convolutions agree
  const auto ser = cubic_coefficients(pw, d.phi1, d.phi2, 1e-8, false);
  CHECK(ser.b1 == doctest::Approx(d.cubic.b1).epsilon(1e-13));
}

TEST_CASE("eigenvector expansion near K") {
  Fixture f;
  DiracOptions opts;
  opts.N = 10;
  opts.cone = false;
  const auto d = analyze_dirac_point(f.b, f.V, FourierPotential{}, 2.0, opts);
  const PlaneWaveBasis pw = d.basis();
  std::vector<Vec2> kappas;
  for (double r : {1e-3, 3e-3, 1e-2})
    for (double a : {0.3, 2.0, 4.1}) kappas.push_back(r * Vec2(std::cos(a), std::sin(a)));
  const auto chk = verify_eigenvector_expansion(pw, f.V, 2.0, d.pairLow, d.phi1, d.phi2, kappas);
  CHECK(chk.deviationPlus[0] < 1e-2);
  CHECK(chk.deviationMinus[0] < 1e-2);
  CHECK(chk.constant < 10.0);
  // opposite directions along k2 rotate the first component by exp(i pi)
  const Vec2 k2 = f.b.k2.normalized() * 1e-3;
  const auto opp = verify_eigenvector_expansion(pw, f.V, 2.0, d.pairLow, d.phi1, d.phi2, {k2, -k2});
  CHECK(opp.deviationPlus[0] < 1e-2);
  CHECK(opp.deviationPlus[1] < 1e-2);
}

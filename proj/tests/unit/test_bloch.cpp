#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fracdirac/bloch.hpp"
#include "fracdirac/dirac.hpp"

using namespace fracdirac;

namespace {

// independent oracle: sorted multiset of |k + m.k|^sigma over a wide index box
std::vector<double> free_levels(const LatticeBasis& b, const Vec2& k, double sigma, int radius, int count) {
  std::vector<double> all;
  for (int m1 = -radius; m1 <= radius; ++m1)
    for (int m2 = -radius; m2 <= radius; ++m2) {
      const Vec2 q = k + m1 * b.k1 + m2 * b.k2;
      all.push_back(std::pow(std::hypot(q[0], q[1]), sigma));
    }
  std::sort(all.begin(), all.end());
  all.resize(count);
  return all;
}

CVector random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d;
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(d(gen), d(gen));
  return v;
}

}  // namespace

TEST_CASE("assembly") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 6, b.K);
  const auto H0 = assemble_bloch_matrix(pw, FourierPotential{}, b.K, 2.0);
  CHECK((H0.H - CMatrix(H0.H.diagonal().asDiagonal())).norm() == 0.0);
  CHECK(H0.H.diagonal().real().minCoeff() == doctest::Approx(std::pow(4.0 * kPi / 3.0, 2)).epsilon(1e-13));
  CHECK(H0.H.diagonal().real().minCoeff() == doctest::Approx(17.5460).epsilon(1e-5));

  const auto H = assemble_bloch_matrix(pw, builtin_V(), b.K, 1.6);
  CHECK((H.H - H.H.adjoint()).norm() == 0.0);
  CHECK(H.H(pw.position({0, 0}), pw.position({0, -1})) == Complex(1.0, 0.0));

  CHECK_THROWS_AS(assemble_bloch_matrix(pw, builtin_V(), b.K, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_bloch_matrix(pw, builtin_V(), b.K, 2.5), std::invalid_argument);
  FourierPotential complexPot;
  complexPot.coeffs[{1, 0}] = 1.0;
  CHECK_THROWS_AS(assemble_bloch_matrix(pw, complexPot, b.K, 2.0), std::invalid_argument);
}

TEST_CASE("free operator matches the multiplier oracle") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 8, b.K);
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (double sigma : {1.2, 1.6, 2.0}) {
    // K: threefold lowest level
    const auto atK = solve_bands(assemble_bloch_matrix(pw, FourierPotential{}, b.K, sigma), 4);
    const double E0 = std::pow(b.K.norm(), sigma);
    CHECK(atK.eigenvalues[0] == doctest::Approx(E0).epsilon(1e-12));
    CHECK(atK.eigenvalues[2] == doctest::Approx(E0).epsilon(1e-12));
    CHECK(atK.eigenvalues[3] > E0 + 1.0);
    for (int t = 0; t < 4; ++t) {
      const Vec2 k = u(gen) * b.k1 + u(gen) * b.k2;
      const auto E = solve_band_energies(assemble_bloch_matrix(pw, FourierPotential{}, k, sigma), 12);
      const auto ref = free_levels(b, k, sigma, 14, 12);
      for (int i = 0; i < 12; ++i) CHECK(std::abs(E[i] - ref[i]) < 1e-10);
    }
  }
}

TEST_CASE("eigenvectors are orthonormal") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 6, b.K);
  const auto sol = solve_bands(assemble_bloch_matrix(pw, builtin_V(), b.K + Vec2(0.1, 0.2), 1.4), 10);
  const CMatrix G = sol.eigenvectors.adjoint() * sol.eigenvectors;
  CHECK((G - CMatrix::Identity(10, 10)).norm() < 1e-10);
  CHECK(std::is_sorted(sol.eigenvalues.begin(), sol.eigenvalues.end()));
  const auto full = solve_bands(assemble_bloch_matrix(pw, builtin_V(), b.K, 1.4), pw.size());
  CHECK(full.eigenvectors.cols() == pw.size());
  for (int i = 0; i < 10; ++i) CHECK(full.eigenvalues[i] == doctest::Approx(solve_bands(assemble_bloch_matrix(pw, builtin_V(), b.K, 1.4), 10).eigenvalues[i]).epsilon(1e-12));
}

TEST_CASE("band sweep") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 6, b.K);
  const auto path = k_path(b.K - 0.1 * b.k2, b.K + 0.1 * b.k2, 21);
  const auto par = band_sweep(pw, builtin_V(), 2.0, path, 4, true);
  const auto ser = band_sweep(pw, builtin_V(), 2.0, path, 4, false);
  CHECK((par.energies - ser.energies).norm() == 0.0);
  const auto single = solve_band_energies(assemble_bloch_matrix(pw, builtin_V(), path[3], 2.0), 4);
  for (int i = 0; i < 4; ++i) CHECK(par.energies(3, i) == single[i]);
  // bands touch only at the midpoint
  for (int r = 0; r < 21; ++r) {
    const double gap = par.energies(r, 1) - par.energies(r, 0);
    if (r == 10) CHECK(gap < 1e-8);
    else CHECK(gap > 1e-3);
  }
  // Lipschitz along the path
  const double h = (path[1] - path[0]).norm();
  for (int r = 1; r < 21; ++r)
    for (int c = 0; c < 4; ++c) CHECK(std::abs(par.energies(r, c) - par.energies(r - 1, c)) < 40.0 * h);
  CHECK_THROWS_AS(band_sweep(pw, builtin_V(), 2.0, {}, 4), std::invalid_argument);
}

TEST_CASE("Dirac energy increases with sigma") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 10, b.K);
  double prev = -1.0;
  for (double sigma : {1.2, 1.6, 2.0}) {
    const auto E = solve_band_energies(assemble_bloch_matrix(pw, builtin_V(), b.K, sigma), 3);
    CHECK(E[0] > prev);
    prev = E[0];
  }
}

TEST_CASE("truncation convergence at K") {
  const auto b = make_honeycomb_basis();
  for (double sigma : {1.2, 2.0}) {
    const auto E12 = solve_band_energies(assemble_bloch_matrix(PlaneWaveBasis(b, 12, b.K), builtin_V(), b.K, sigma), 2);
    const auto E16 = solve_band_energies(assemble_bloch_matrix(PlaneWaveBasis(b, 16, b.K), builtin_V(), b.K, sigma), 2);
    CHECK(std::abs(E12[0] - E16[0]) < 1e-8);
    CHECK(std::abs(E12[1] - E16[1]) < 1e-8);
  }
}

TEST_CASE("p-sigma operator") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 5, b.K);
  CVector e = CVector::Zero(pw.size());
  e[pw.position({0, 0})] = 1.0;
  const double sigma = 1.3;
  const auto p = apply_p_sigma(e, pw, sigma);
  const Complex f = kI * sigma * std::pow(b.K.norm(), sigma - 2.0);
  CHECK(std::abs(p[0][pw.position({0, 0})] - f * b.K[0]) < 1e-14);
  CHECK(std::abs(p[1][pw.position({0, 0})] - f * b.K[1]) < 1e-14);
  CHECK(p[0].norm() == doctest::Approx(std::abs(f * b.K[0])));

  const CVector r = random_vector(pw.size(), 5);
  const auto p2 = apply_p_sigma(r, pw, 2.0);
  for (int i = 0; i < pw.size(); ++i) {
    const Vec2 q = pw.momentum(i);
    CHECK(std::abs(p2[0][i] - 2.0 * kI * q[0] * r[i]) < 1e-12);
    CHECK(std::abs(p2[1][i] - 2.0 * kI * q[1] * r[i]) < 1e-12);
  }
}

TEST_CASE("p-sigma keeps the coefficient decay of an eigenfunction") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 16, b.K);
  const double sigma = 1.6;
  const auto sol = solve_bands(assemble_bloch_matrix(pw, builtin_V(), b.K, sigma), 2);
  const CVector phi = sol.eigenvectors.col(0);
  const auto p = apply_p_sigma(phi, pw, sigma);
  for (int r : {4, 8}) {
    double qmax = 0.0;
    for (int i = 0; i < pw.size(); ++i) qmax = std::max(qmax, pw.momentum(i).norm());
    const double bound = sigma * sigma * std::pow(qmax, 2.0 * sigma - 2.0);
    const double ratio = (tail_norm(p[0], pw, r) + tail_norm(p[1], pw, r)) / tail_norm(phi, pw, r);
    CHECK(ratio <= bound);
  }
  // both decay fast: tail at N/2 is tiny compared with the total
  CHECK(tail_norm(p[0], pw, 8) + tail_norm(p[1], pw, 8) < 1e-12 * (p[0].squaredNorm() + p[1].squaredNorm()));
}

TEST_CASE("reduced resolvent") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 12, b.K);
  const auto V = builtin_V();
  const double sigma = 1.8;
  auto full = solve_bands(assemble_bloch_matrix(pw, V, b.K, sigma), pw.size(), 12);
  const auto pair = find_degenerate_pair(full);
  const CVector phi1 = full.eigenvectors.col(pair.lower);
  const CVector phi2 = full.eigenvectors.col(pair.lower + 1);
  const ReducedResolvent L(full, pair.lower, pair.E_D, phi1, phi2);

  CHECK(L.apply(phi1).norm() < 1e-12);
  const int other = pair.lower + 5;
  const CVector eb = full.eigenvectors.col(other);
  CHECK((L.apply(eb) - eb / (full.eigenvalues[other] - pair.E_D)).norm() < 1e-10);

  const CVector f = random_vector(pw.size(), 9);
  const CVector u = L.apply(f);
  CVector Pf = f - phi1.dot(f) * phi1 - phi2.dot(f) * phi2;
  const CVector lhs = apply_hamiltonian(pw, V, sigma, u) - pair.E_D * u;
  CHECK((lhs - Pf).norm() < 1e-9 * Pf.norm());
  CHECK(std::abs(phi1.dot(u)) < 1e-12);
  CHECK(std::abs(phi2.dot(u)) < 1e-12);

  CHECK_THROWS_AS(ReducedResolvent(full, pair.lower, pair.E_D + 1.0, phi1, phi2), ContractError);
}

TEST_CASE("commutation with the rotation") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 12, b.K);
  const CVector t = random_vector(pw.size(), 21);
  CHECK(commutator_check(pw, builtin_V(), 1.5, t) < 1e-10 * t.norm());
  CHECK(commutator_check(pw, FourierPotential{}, 1.5, t) < 1e-12 * t.norm());
  FourierPotential cosine;
  cosine.coeffs[{1, 0}] = 1.0;
  cosine.coeffs[{-1, 0}] = 1.0;
  CHECK(commutator_check(pw, cosine, 1.5, t) > 0.1 * t.norm());
}

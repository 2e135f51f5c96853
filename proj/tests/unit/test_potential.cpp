#include <doctest.h>

#include <cmath>
#include <random>

#include "fracdirac/potential.hpp"

using namespace fracdirac;

TEST_CASE("cosine honeycomb potential") {
  const auto b = make_honeycomb_basis();
  const auto V = builtin_V();
  CHECK(V.evaluate(b, Vec2::Zero()).real() == doctest::Approx(6.0));
  CHECK(V.coefficient({0, 1}) == Complex(1.0, 0.0));
  CHECK(V.coefficient({0, 0}) == Complex(0.0, 0.0));
  const auto rep = check_honeycomb(b, V);
  CHECK(rep.real);
  CHECK(rep.even);
  CHECK(rep.periodic);
  CHECK(rep.rotationInvariant);
  CHECK(rep.honeycomb());
  CHECK(rep.rotationResidual < 1e-15);
}

TEST_CASE("sine perturbation") {
  const auto b = make_honeycomb_basis();
  const auto W = builtin_W();
  CHECK(std::abs(W.evaluate(b, Vec2::Zero())) < 1e-15);
  CHECK(std::abs(W.coefficient({0, 1}) - Complex(0.0, -0.5)) < 1e-15);
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    const Vec2 y(u(gen), u(gen));
    CHECK(std::abs(W.evaluate(b, -y) + W.evaluate(b, y)) < 1e-12);
    CHECK(std::abs(W.evaluate(b, y).imag()) < 1e-12);
  }
  const auto rep = check_honeycomb(b, W);
  CHECK_FALSE(rep.even);
  CHECK(rep.odd);
  CHECK(rep.real);
  CHECK(rep.rotationInvariant);
}

TEST_CASE("single coefficient is not real") {
  const auto b = make_honeycomb_basis();
  FourierPotential p;
  p.coeffs[{1, 0}] = 1.0;
  const auto rep = check_honeycomb(b, p);
  CHECK_FALSE(rep.real);
  CHECK_FALSE(rep.rotationInvariant);
}

TEST_CASE("grid sampling") {
  const auto b = make_honeycomb_basis();
  const ObliqueGrid grid(b, 3, 8, 0.1);
  const auto zero = evaluate_on_grid(FourierPotential{}, grid);
  for (auto v : zero) CHECK(v == Complex{});

  const auto samples = evaluate_on_grid(builtin_V(), grid);
  CHECK(samples[grid.flat(0, 0)].real() == doctest::Approx(6.0));
  double maxImag = 0.0;
  Complex mean{};
  for (int j1 = 0; j1 < 8; ++j1)
    for (int j2 = 0; j2 < 8; ++j2) mean += samples[grid.flat(j1, j2)];
  for (auto v : samples) maxImag = std::max(maxImag, std::abs(v.imag()));
  CHECK(std::abs(mean / 64.0) < 1e-12);
  CHECK(maxImag < 1e-12);
  // exact periodicity and agreement with pointwise synthesis
  for (int j1 = 0; j1 < grid.side(); j1 += 5)
    for (int j2 = 0; j2 < grid.side(); j2 += 3) {
      CHECK(std::abs(samples[grid.flat(j1, j2)] - samples[grid.flat(j1 % 8, j2 % 8)]) == 0.0);
      CHECK(std::abs(samples[grid.flat(j1, j2)] - builtin_V().evaluate(b, grid.micro_point(j1, j2))) < 1e-12);
    }
  CHECK_THROWS_AS(ObliqueGrid(b, 0, 8, 0.1), ContractError);
}

TEST_CASE("rotation invariance on samples") {
  const auto b = make_honeycomb_basis();
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto V = builtin_V();
  const auto W = builtin_W();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec2 y(u(gen), u(gen));
    const Vec2 ry = b.R.transpose() * y;
    worst = std::max(worst, std::abs(V.evaluate(b, ry) - V.evaluate(b, y)));
    worst = std::max(worst, std::abs(W.evaluate(b, ry) - W.evaluate(b, y)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("modulations") {
  const auto b = make_honeycomb_basis();
  const ObliqueGrid grid(b, 16, 2, 0.25);
  const auto c = Modulation::constant(0.7).sample(grid);
  for (double v : c) CHECK(v == 0.7);

  Modulation g;
  g.kind = Modulation::Kind::Gaussian;
  g.amplitude = 2.0;
  g.center = grid.point(16, 16);
  g.width = 0.5;
  CHECK(g.evaluate(g.center, b, grid.box_length()) == doctest::Approx(2.0).epsilon(1e-10));
  // periodic in the box
  const Vec2 x = grid.point(3, 5);
  CHECK(g.evaluate(x, b, grid.box_length()) ==
        doctest::Approx(g.evaluate(x + grid.box_length() * b.v1, b, grid.box_length())).epsilon(1e-12));

  Modulation w;
  w.kind = Modulation::Kind::TanhWall;
  w.amplitude = 1.0;
  w.center = grid.point(8, 0);
  w.width = 0.2;
  CHECK(std::abs(w.evaluate(w.center, b, grid.box_length())) < 1e-12);
  CHECK(w.evaluate(grid.point(12, 0), b, grid.box_length()) > 0.9);
  CHECK(w.evaluate(grid.point(28, 0), b, grid.box_length()) < -0.9);
  CHECK_THROWS_AS(modulation_kind_from_string("step"), ConfigError);
  CHECK_THROWS_AS(builtin_potential("nope"), ConfigError);
}

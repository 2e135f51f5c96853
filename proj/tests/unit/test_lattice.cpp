#include <doctest.h>

#include <cmath>

#include "fracdirac/lattice.hpp"

using namespace fracdirac;

TEST_CASE("dual basis solves the duality system") {
  const auto b = make_honeycomb_basis();
  const Vec2* v[2] = {&b.v1, &b.v2};
  const Vec2* k[2] = {&b.k1, &b.k2};
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      worst = std::max(worst, std::abs(v[i]->dot(*k[j]) - (i == j ? 2.0 * kPi : 0.0)));
  CHECK(worst < 1e-12);
  // independent closed form
  const double s3 = std::sqrt(3.0);
  CHECK((b.k1 - 2.0 * kPi * Vec2(1.0 / s3, 1.0)).norm() < 1e-12);
  CHECK((b.k2 - 2.0 * kPi * Vec2(1.0 / s3, -1.0)).norm() < 1e-12);
}

TEST_CASE("high-symmetry points and rotation") {
  const auto b = make_honeycomb_basis();
  CHECK(b.K.norm() == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
  CHECK((b.Kprime + b.K).norm() < 1e-15);
  const Mat2 R3 = b.R * b.R * b.R;
  CHECK((R3 - Mat2::Identity()).norm() < 1e-12);
  CHECK((b.R.transpose() * b.R - Mat2::Identity()).norm() < 1e-12);
  CHECK((b.R * b.K - (b.K + b.k2)).norm() < 1e-12);
  CHECK((b.R.transpose() * b.K - (b.K - b.k1)).norm() < 1e-12);
  CHECK(b.cellArea == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("plane-wave basis layout") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 3, b.K);
  CHECK(pw.size() == 49);
  CHECK(pw.index(0) == MillerIndex{-3, -3});
  CHECK(pw.index(1) == MillerIndex{-3, -2});
  for (int p = 0; p < pw.size(); ++p) CHECK(pw.position(pw.index(p)) == p);
  // near K every momentum stays away from the origin
  const PlaneWaveBasis shifted(b, 6, b.K + Vec2(0.05, -0.03));
  for (int p = 0; p < shifted.size(); ++p) CHECK(shifted.momentum(p).norm() > 0.9 * b.K.norm());
}

TEST_CASE("rotation index map") {
  const auto b = make_honeycomb_basis();
  const PlaneWaveBasis pw(b, 4, b.K);
  const auto map = rotation_index_map(b, pw);
  CHECK(map.image[pw.position({0, 0})] == pw.position({-1, 0}));
  int kept = 0;
  for (int p = 0; p < pw.size(); ++p) {
    const MillerIndex m = pw.index(p);
    const MillerIndex closed = rotate_index(m);
    if (map.image[p] >= 0) {
      ++kept;
      CHECK(pw.index(map.image[p]) == closed);
      // symbolic oracle: R^T (K + m.k) = K + m'.k
      CHECK((b.R.transpose() * pw.momentum(m) - pw.momentum(closed)).norm() < 1e-12);
    } else {
      CHECK(!pw.contains(closed));
    }
  }
  CHECK(kept + static_cast<int>(map.dropped.size()) == pw.size());
  // cube is the identity where the orbit stays inside
  for (int p = 0; p < pw.size(); ++p) {
    const int a = map.image[p];
    if (a < 0 || map.image[a] < 0 || map.image[map.image[a]] < 0) continue;
    CHECK(map.image[map.image[a]] == p);
  }
  CHECK_THROWS_AS(rotation_index_map(b, PlaneWaveBasis(b, 2, Vec2::Zero())), std::invalid_argument);
}

TEST_CASE("rotation map rejects a corrupted geometry") {
  auto b = make_honeycomb_basis();
  b.K = Vec2(0.3, 0.1);
  const PlaneWaveBasis pw(b, 2, b.K);
  CHECK_THROWS_AS(rotation_index_map(b, pw), ContractError);
}

TEST_CASE("k_path") {
  const auto b = make_honeycomb_basis();
  const auto same = k_path(b.K, b.K, 3);
  REQUIRE(same.size() == 3);
  for (const auto& k : same) CHECK((k - b.K).norm() == 0.0);
  const auto mid = k_path(b.K - 0.1 * b.k2, b.K + 0.1 * b.k2, 3);
  CHECK((mid[1] - b.K).norm() < 1e-15);
  const auto ends = k_path(Vec2::Zero(), b.k1, 2);
  CHECK(ends[0].norm() == 0.0);
  CHECK((ends[1] - b.k1).norm() == 0.0);
  CHECK_THROWS(k_path(b.K, b.K, 1));
}

#include <doctest.h>

#include "patchtooth/ensemble.hpp"
#include "support.hpp"

using namespace patchtooth;

TEST_CASE("member diffusivities are phase shifts") {
  const auto e = build_ensemble_1d(DiffusivityProfile1D({1, 2, 3}));
  CHECK(e.members() == 3);
  CHECK(e.kappa(0, 0) == 1);
  CHECK(e.kappa(1, 0) == 2);
  CHECK(e.kappa(2, 0) == 3);
  CHECK(e.kappa(2, 1) == 1);
  CHECK(e.member_profile(1).at(0) == 2);
}

TEST_CASE("edge sources match edge diffusivities") {
  for (int p = 1; p <= 7; ++p) {
    const auto k = random_lognormal_profile(p, 1.0, static_cast<std::uint64_t>(p));
    for (int n = 1; n <= 9; ++n) {
      for (int l = 0; l < p; ++l) {
        const int s = left_edge_source(l, n, p);
        // Left-edge link of member l equals right-edge link of its source.
        CHECK(k.at(0 + l) == k.at(n + s));
        CHECK(right_edge_source(s, n, p) == l);
      }
    }
  }
}

TEST_CASE("shift matrix") {
  const auto k = DiffusivityProfile1D({1.0, 2.0, 3.0});
  const Matrix K = build_shift_matrix(k, 4);
  // (l - 4) mod 3 = l - 1 mod 3
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 2) = 1.0;
  expected(1, 0) = 2.0;
  expected(2, 1) = 3.0;
  CHECK(K == expected);
  // Rows of K and K^T carry each member's left and right edge diffusivity.
  const Matrix Kt = K.transpose();
  for (int l = 0; l < 3; ++l) {
    CHECK(K.row(l).sum() == k.at(l));
    CHECK(Kt.row(l).sum() == k.at(4 + l));
  }
  CHECK(build_shift_matrix(k, 3) == Matrix(Vector(Eigen::Vector3d(1, 2, 3)).asDiagonal()));
}

TEST_CASE("2D permutations satisfy the edge identities") {
  const auto k = testing::chequer();
  for (int nx = 1; nx <= 6; ++nx) {
    for (int ny = 1; ny <= 5; ++ny) {
      const auto e = build_ensemble_2d(k, nx, ny);
      CHECK(e.members() == 20);
      for (int phi = 0; phi < 5; ++phi) {
        for (int psi = 0; psi < 4; ++psi) {
          const int m = e.member_index(phi, psi);
          int sx = -1, sy = -1;
          for (int c = 0; c < 20; ++c) {
            if (e.perm_x(m, c) == 1.0) sx = c;
            if (e.perm_y(m, c) == 1.0) sy = c;
          }
          REQUIRE(sx >= 0);
          REQUIRE(sy >= 0);
          for (int j = 0; j < ny; ++j) {
            // left edge x-link of m equals right edge x-link of its source
            CHECK(k.kx(0 + phi, j + 1 + psi) == k.kx(nx + sx / 4, j + 1 + sx % 4));
          }
          for (int i = 0; i < nx; ++i) {
            CHECK(k.ky(i + 1 + phi, 0 + psi) == k.ky(i + 1 + sy / 4, ny + sy % 4));
          }
        }
      }
      CHECK((e.perm_x * e.perm_x.transpose() - Matrix::Identity(20, 20)).norm() == 0.0);
    }
  }
}

TEST_CASE("ensemble mean") {
  Vector s(6);
  s << 1, 3, 10, 20, -1, 1;
  const Vector m = ensemble_mean(s, 2);
  CHECK(m.size() == 3);
  CHECK(m(0) == 2);
  CHECK(m(1) == 15);
  CHECK(m(2) == 0);
  CHECK_THROWS_AS(ensemble_mean(s, 4), InvalidArgument);
}

#include <doctest.h>

#include <numbers>

#include "patchtooth/geometry.hpp"

using namespace patchtooth;

TEST_CASE("derived lengths") {
  const auto g = build_grid_1d(2 * std::numbers::pi, 9, 5, 0.3);
  CHECK(g.macro_spacing() == doctest::Approx(2 * std::numbers::pi / 9).epsilon(1e-15));
  CHECK(g.spacing() == doctest::Approx(0.041887902047863905).epsilon(1e-14));

  const auto unit = build_grid_1d(1.0, 1, 1, 0.5);
  CHECK(unit.macro_spacing() == 1.0);
  CHECK(unit.width() == 0.5);
  CHECK(unit.spacing() == 0.5);
}

TEST_CASE("abutting patches at r = 1 share edge and interior positions") {
  const auto g = build_grid_1d(4.0, 4, 2, 1.0);
  for (int I = 0; I + 1 < 4; ++I) {
    CHECK(g.position(I, 3) == doctest::Approx(g.position(I + 1, 1)).epsilon(1e-15));
    CHECK(g.position(I + 1, 0) == doctest::Approx(g.position(I, 2)).epsilon(1e-15));
  }
}

TEST_CASE("d n = r H") {
  for (int N : {1, 3, 9, 40})
    for (int n : {1, 2, 5, 8})
      for (double r : {0.01, 0.1, 0.3, 1.0}) {
        const auto g = build_grid_1d(7.3, N, n, r);
        CHECK(std::abs(g.spacing() * n - r * g.macro_spacing()) <= 1e-14 * r * g.macro_spacing());
        CHECK(g.position(0, n + 1) - g.position(0, 0) == doctest::Approx(g.width() + g.spacing()));
      }
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(build_grid_1d(0.0, 3, 2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(build_grid_1d(1.0, 0, 2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(build_grid_1d(1.0, 3, 0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(build_grid_1d(1.0, 3, 2, 1.5), InvalidArgument);
  CHECK_THROWS_AS(build_grid_1d(1.0, 3, 2, 0.0), InvalidArgument);
}

TEST_CASE("compatibility diagnostics") {
  const DiffusivityProfile1D five({1, 2, 3, 4, 5});
  CHECK(validate_compatibility(build_grid_1d(1.0, 9, 5, 0.3), five, false).empty());
  const auto bad = validate_compatibility(build_grid_1d(1.0, 9, 4, 0.3), five, false);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].field == "grid.n");
  CHECK(has_errors(bad));
  CHECK(!has_errors(validate_compatibility(build_grid_1d(1.0, 9, 4, 0.3), five, true)));

  const DiffusivityProfile2D k({{1, 1}, {1, 1}}, {{1, 1}, {1, 1}});
  const auto g2 = build_grid_2d(build_grid_1d(1, 3, 2, 0.5), build_grid_1d(1, 3, 3, 0.5));
  const auto d2 = validate_compatibility(g2, k, false);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].field == "grid.y.n");
}

TEST_CASE("lattice alignment") {
  CHECK(lattice_aligned(build_grid_1d(1.0, 9, 5, 0.1), 5));    // H/d = 50
  CHECK(!lattice_aligned(build_grid_1d(1.0, 9, 5, 0.3), 5));   // H/d = 16.67
  CHECK(!lattice_aligned(build_grid_1d(1.0, 9, 4, 0.5), 3));   // H/d = 8
  CHECK(ratio_for_spacing(1.0, 10, 5, 0.002) == doctest::Approx(0.1));
}

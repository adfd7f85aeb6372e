#include <doctest.h>

#include "patchtooth/assembly.hpp"
#include "patchtooth/homogenize.hpp"
#include "patchtooth/spectra.hpp"
#include "support.hpp"

using namespace patchtooth;

TEST_CASE("symbol structure") {
  const DiffusivityProfile1D k({1, 2, 3});
  const auto s0 = fourier_symbol(k, 0.0);
  CHECK(s0.matrix.imag().cwiseAbs().maxCoeff() == 0.0);
  for (int r = 0; r < 3; ++r) CHECK(std::abs(s0.matrix.row(r).sum()) < 1e-15);
  for (double kk : {0.1, 0.7, -1.3, 2.9}) {
    const auto s = fourier_symbol(k, kk);
    CHECK((s.matrix - s.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    const auto a = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(s.matrix).eigenvalues();
    const auto b = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(fourier_symbol(k, -kk).matrix).eigenvalues();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  }
  const auto scalar = fourier_symbol(DiffusivityProfile1D({2.5}), 0.4).matrix;
  CHECK(std::abs(scalar(0, 0) - (-4 * 2.5 * std::sin(0.2) * std::sin(0.2))) < 1e-14);
  // p = 2: both neighbours of a member are the other member.
  const auto two = fourier_symbol(DiffusivityProfile1D({1, 3}), 0.5).matrix;
  CHECK(std::abs(two(0, 1) - (1.0 * std::polar(1.0, 0.5) + 3.0 * std::polar(1.0, -0.5))) < 1e-15);
}

TEST_CASE("slow branch") {
  const DiffusivityProfile1D k({1, 2, 3});
  CHECK(std::abs(slow_branch(k, 0.0)) <= 1e-13);
  CHECK(slow_branch(DiffusivityProfile1D({1.0}), 0.1) == doctest::Approx(-4 * std::sin(0.05) * std::sin(0.05)).epsilon(1e-13));
  const double q = 0.05;
  const double series = -18.0 / 11 * q * q + 675.0 / 2662 * std::pow(q, 4);
  CHECK(std::abs(slow_branch(k, q) - series) <= 10 * std::pow(q, 6));
  // Period-2 folding of a homogeneous lattice: the branches meet at k = pi/2.
  CHECK_THROWS_AS(slow_branch(DiffusivityProfile1D({1, 1}), std::numbers::pi / 2), NumericalError);
}

TEST_CASE("coefficients for the three-phase example") {
  const auto c = extract_coefficients(DiffusivityProfile1D({1, 2, 3}), 0.01);
  CHECK(std::abs(c.K2 / (18.0 / 11) - 1) <= 1e-9);
  CHECK(std::abs(c.K4 / (675.0 / 2662) - 1) <= 1e-6);
  CHECK(c.fit_residual <= 1e-10);
  CHECK(c.beta == doctest::Approx(2 * std::numbers::pi * std::numbers::pi / (9 * 1e-4)));

  // Halving the nodes barely moves K4.
  auto nodes = default_fit_nodes(DiffusivityProfile1D({1, 2, 3}));
  for (double& x : nodes) x *= 0.5;
  const auto half = extract_coefficients(DiffusivityProfile1D({1, 2, 3}), 0.01, {nodes});
  CHECK(std::abs(half.K4 / c.K4 - 1) <= 1e-6);
}

TEST_CASE("constant diffusivity: K2 = c, K4 = c/12") {
  for (double c : {0.3, 1.0, 7.5}) {
    for (int p : {1, 2, 4}) {
      const auto h = extract_coefficients(DiffusivityProfile1D(std::vector<double>(p, c)), 0.1);
      CHECK(std::abs(h.K2 - c) <= 1e-12 * c);
      CHECK(std::abs(h.K4 - c / 12) <= 1e-8 * c / 12);
    }
  }
}

TEST_CASE("fitted K2 equals the harmonic mean for random profiles") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int p = 1 + static_cast<int>(seed % 8);
    const auto k = random_lognormal_profile(p, 1.0, 1000 + seed);
    const auto c = extract_coefficients(k, 0.05);  // throws if the fit disagrees beyond 1e-9
    double inv = 0.0;
    for (double v : k.values()) inv += 1.0 / v;
    CHECK(std::abs(c.K2 * inv / p - 1) <= 1e-12);
  }
}

TEST_CASE("beta bounds the fast symbol eigenvalues for p >= 3") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int p = 3 + static_cast<int>(seed % 6);
    const auto k = random_lognormal_profile(p, 1.0, 2000 + seed);
    const double d = 0.1;
    const auto c = extract_coefficients(k, d);
    const auto ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(fourier_symbol(k, 0.0).matrix).eigenvalues();
    for (int i = 0; i + 1 < p; ++i) CHECK(ev(i) <= -c.beta * d * d);
  }
}

TEST_CASE("predictions") {
  HomogenisedCoefficients c;
  c.K2 = 1.0;
  c.d = 0.1;
  CHECK(predict_macroscale_eigenvalues(c, {0.0, 2.0}) == std::vector<double>{0.0, -4.0});

  const auto g = build_grid_1d(2 * std::numbers::pi, 9, 5, 0.3);
  const auto h = extract_coefficients(testing::five_phase(), g.spacing());
  CHECK(h.K2 == doctest::Approx(1.000154).epsilon(1e-6));
  CHECK(predict_macroscale_eigenvalues(h, {1.0})[0] == doctest::Approx(-0.9987).epsilon(0.005));
}

TEST_CASE("lattice spectra from symbols match dense lattices") {
  const auto k = testing::five_phase();
  const auto dense = testing::eigenvalues_of(full_lattice_operator_1d(k, 40, 0.2).matrix);
  CHECK(compare_spectra(lattice_spectrum_via_symbol_1d(k, 40, 0.2), dense) <= 1e-13);

  const DiffusivityProfile2D k2({{1.0, 2.0}, {0.5, 3.0}}, {{2.0, 0.7}, {1.1, 0.4}});
  const auto dense2 = testing::eigenvalues_of(full_lattice_operator_2d(k2, 6, 8, 0.5, 0.3).matrix);
  CHECK(compare_spectra(lattice_spectrum_via_symbol_2d(k2, 6, 8, 0.5, 0.3), dense2) <= 1e-13);
  CHECK_THROWS_AS(lattice_spectrum_via_symbol_1d(k, 41, 0.2), InvalidArgument);
}

namespace {

bool in_spectrum(double value, const std::vector<double>& spectrum, double scale) {
  for (double v : spectrum)
    if (std::abs(v - value) <= 1e-10 * scale) return true;
  return false;
}

}  // namespace

TEST_CASE("wavenumber-selected lattice modes are lattice eigenvalues") {
  const auto k = testing::five_phase();
  const auto dense = testing::eigenvalues_of(full_lattice_operator_1d(k, 60, 0.1).matrix);
  const auto macro = lattice_macro_spectrum_1d(k, 60, 0.1, 7);
  REQUIRE(macro.size() == 7);
  const double scale = std::abs(dense.front());
  for (double v : macro) CHECK(in_spectrum(v, dense, scale));
  // in 1D these are also the smallest in magnitude
  auto by_size = dense;
  std::sort(by_size.begin(), by_size.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  CHECK(compare_spectra(macro, {by_size.begin(), by_size.begin() + 7}) <= 1e-12);

  const auto k2 = random_lognormal_profile_2d(2, 2, 0.5, 3);
  const auto dense2 = testing::eigenvalues_of(full_lattice_operator_2d(k2, 24, 20, 0.3, 0.4).matrix);
  const auto macro2 = lattice_macro_spectrum_2d(k2, 24, 20, 0.3, 0.4, 3, 5);
  REQUIRE(macro2.size() == 15);
  for (double v : macro2) CHECK(in_spectrum(v, dense2, std::abs(dense2.front())));
  CHECK_THROWS_AS(lattice_macro_spectrum_1d(k, 60, 0.1, 13), InvalidArgument);
}

TEST_CASE("patch macro modes match the lattice in 2D") {
  const auto k2 = random_lognormal_profile_2d(2, 2, 0.5, 3);
  const auto g = build_grid_1d(2 * std::numbers::pi, 3, 2, 0.25);
  const auto op = assemble_patch_2d({g, g}, k2, CouplingSpec::spectral(), CouplingSpec::spectral());
  const auto report = eigen_symmetric(op);
  const long m = std::lround(g.length / g.spacing());
  REQUIRE(m == 24);
  const auto lattice = lattice_macro_spectrum_2d(k2, 24, 24, g.spacing(), g.spacing(), 3, 3);
  CHECK(compare_spectra(report.macro(), lattice) <= 1e-10);
  const auto dense = testing::eigenvalues_of(full_lattice_operator_2d(k2, 24, 24, g.spacing(), g.spacing()).matrix);
  for (double v : report.macro()) CHECK(in_spectrum(v, dense, std::abs(dense.front())));
}

TEST_CASE("even N: all but the Nyquist macro mode match the lattice") {
  const auto k = testing::five_phase();
  const auto g = build_grid_1d(2 * std::numbers::pi, 12, 10, 0.1);
  const auto r = eigen_symmetric(assemble_patch_1d(g, k, CouplingSpec::spectral()));
  const auto lattice = lattice_macro_spectrum_1d(k, static_cast<int>(std::lround(g.length / g.spacing())), g.spacing(), 12);
  const auto macro = r.macro();
  CHECK(compare_spectra({macro.begin(), macro.end() - 1}, {lattice.begin(), lattice.end() - 1}) <= 1e-10);
  // The cosine rule keeps only one phase of the Nyquist wave.
  CHECK(std::abs(macro.back()) > 10 * std::abs(lattice.back()));
}

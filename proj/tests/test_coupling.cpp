#include <doctest.h>

#include <complex>
#include <numbers>
#include <sstream>

#include "patchtooth/coupling.hpp"
#include "support.hpp"

using namespace patchtooth;

namespace {

// Real trigonometric interpolant of patch data f at fractional patch
// coordinate x, built from the plain discrete Fourier sum. For even N the
// Nyquist term contributes f_hat * cos(pi x).
double trig_interpolate(const std::vector<double>& f, double x) {
  const int n = static_cast<int>(f.size());
  std::complex<double> total = 0.0;
  for (int m = -(n - 1) / 2; m <= (n - 1) / 2; ++m) {
    std::complex<double> c = 0.0;
    for (int j = 0; j < n; ++j) c += f[j] * std::polar(1.0, -2 * std::numbers::pi * m * j / n);
    total += c / static_cast<double>(n) * std::polar(1.0, 2 * std::numbers::pi * m * x / n);
  }
  double value = total.real();
  if (n % 2 == 0) {
    double c = 0.0;
    for (int j = 0; j < n; ++j) c += f[j] * (j % 2 ? -1.0 : 1.0);
    value += c / n * std::cos(std::numbers::pi * x);
  }
  return value;
}

std::vector<double> unit(int n, int at) {
  std::vector<double> e(n, 0.0);
  e[at] = 1.0;
  return e;
}

}  // namespace

TEST_CASE("spectral weights against a direct Fourier sum") {
  for (int N : {1, 2, 3, 4, 8, 9, 10, 15}) {
    for (double r : {0.1, 0.3, 0.5, 0.77, 1.0}) {
      const auto w = spectral_weights(N, r);
      double sum = 0.0;
      for (int o = 0; o < N; ++o) {
        sum += w.right[o];
        CHECK(w.right[o] == doctest::Approx(trig_interpolate(unit(N, o), r)).epsilon(1e-13).scale(1));
        CHECK(w.left[o] == doctest::Approx(trig_interpolate(unit(N, o), -r)).epsilon(1e-13).scale(1));
        CHECK(std::abs(w.left_at(o) - w.right_at(-o)) <= 1e-13);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("spectral weights: exact cases") {
  const auto w3 = spectral_weights(3, 1.0);
  CHECK(std::abs(w3.right[0]) < 1e-15);
  CHECK(w3.right[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(w3.right[2]) < 1e-15);
  CHECK(spectral_weights(1, 0.37).right == std::vector<double>{1.0});
}

TEST_CASE("spectral interpolation is exact on retained wavenumbers") {
  const int N = 9;
  const double r = 0.3;
  const auto w = spectral_weights(N, r);
  for (int k = -4; k <= 4; ++k) {
    Vector first(N), last(N);
    for (int I = 0; I < N; ++I) {
      first(I) = std::cos(2 * std::numbers::pi * k * I / N + 0.4);
      last(I) = std::sin(2 * std::numbers::pi * k * I / N - 0.2);
    }
    const auto e = apply_edges_1d(w, first, last);
    for (int I = 0; I < N; ++I) {
      CHECK(e.right(I) == doctest::Approx(std::cos(2 * std::numbers::pi * k * (I + r) / N + 0.4)).scale(1).epsilon(1e-12));
      CHECK(e.left(I) == doctest::Approx(std::sin(2 * std::numbers::pi * k * (I - r) / N - 0.2)).scale(1).epsilon(1e-12));
    }
  }
}

TEST_CASE("lagrangian weights are Lagrange interpolation over nearest patches") {
  for (int P = 1; P <= 6; ++P) {
    const int N = 2 * P + 3;
    for (double r : {0.1, 0.3, 0.5, 1.0}) {
      const auto w = lagrangian_weights(N, r, P);
      for (int o = -P; o <= P; ++o) {
        CHECK(w.right_at(o) == doctest::Approx(testing::lagrange_basis(P, o, r)).scale(1).epsilon(1e-12));
        CHECK(w.left_at(o) == doctest::Approx(testing::lagrange_basis(P, o, -r)).scale(1).epsilon(1e-12));
      }
      for (int o = P + 1; o < N - P; ++o) {
        CHECK(w.right_at(o) == 0.0);
        CHECK(w.left_at(o) == 0.0);
      }
    }
  }
}

TEST_CASE("nearest-neighbour weights in closed form") {
  const double r = 0.3;
  const auto w = lagrangian_weights(5, r, 1);
  CHECK(w.right_at(-1) == doctest::Approx(r * (r - 1) / 2));
  CHECK(w.right_at(0) == doctest::Approx(1 - r * r));
  CHECK(w.right_at(1) == doctest::Approx(r * (r + 1) / 2));
  const auto exact = lagrangian_weights(5, 1.0, 1);
  CHECK(std::abs(exact.right_at(-1)) < 1e-15);
  CHECK(std::abs(exact.right_at(0)) < 1e-15);
  CHECK(exact.right_at(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(lagrangian_weights(4, r, 2), InvalidArgument);
}

TEST_CASE("edge application") {
  const auto w = lagrangian_weights(9, 0.3, 2);
  const Vector c = Vector::Constant(9, 2.5);
  const auto e = apply_edges_1d(w, c, c);
  CHECK((e.left.array() - 2.5).abs().maxCoeff() < 1e-14);
  CHECK((e.right.array() - 2.5).abs().maxCoeff() < 1e-14);

  const auto shift = apply_edges_1d(spectral_weights(7, 1.0), Vector::LinSpaced(7, 0, 6), Vector::LinSpaced(7, 0, 6));
  for (int I = 0; I < 7; ++I) CHECK(shift.right(I) == doctest::Approx((I + 1) % 7).scale(1).epsilon(1e-13));

  CHECK_THROWS_AS(apply_edges_1d(w, Vector::Zero(8), Vector::Zero(9)), InvalidArgument);
}

TEST_CASE("P = 2 edge values of a sine are fourth order in H") {
  // Degree-4 interpolation is O(H^5); require at least fourth order.
  auto worst = [](int N) {
    const double L = 2 * std::numbers::pi, H = L / N, r = 0.3;
    const auto w = lagrangian_weights(N, r, 2);
    Vector first(N), last(N);
    for (int I = 0; I < N; ++I) {
      first(I) = std::sin((I + 1) * H);
      last(I) = first(I);
    }
    const auto e = apply_edges_1d(w, first, last);
    double err = 0.0;
    for (int I = 0; I < N; ++I) err = std::max(err, std::abs(e.right(I) - std::sin((I + 1 + r) * H)));
    return err;
  };
  const double e9 = worst(9), e18 = worst(18), e36 = worst(36);
  CHECK(e9 < 1e-2);
  CHECK(std::log2(e18 / e36) > 3.8);
}

TEST_CASE("weights CSV") {
  std::ostringstream out;
  write_weights_csv(out, lagrangian_weights(3, 0.5, 1));
  const auto text = out.str();
  CHECK(text.rfind("offset,w_right,w_left\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

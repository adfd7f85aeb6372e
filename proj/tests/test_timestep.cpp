#include <doctest.h>

#include "patchtooth/assembly.hpp"
#include "patchtooth/spectra.hpp"
#include "patchtooth/timestep.hpp"
#include "support.hpp"

using namespace patchtooth;

namespace {

AssembledOperator scalar(double v) {
  AssembledOperator op;
  op.matrix = Matrix::Constant(1, 1, v);
  return op;
}

AssembledOperator nine_patches() {
  const auto g = build_grid_1d(2 * std::numbers::pi, 9, 5, 0.3);
  return assemble_patch_1d(g, testing::five_phase(), CouplingSpec::spectral());
}

Vector sine_at_points(const PatchGrid1D& g) {
  Vector u(g.patches * g.points);
  for (int I = 0; I < g.patches; ++I)
    for (int i = 0; i < g.points; ++i) u(I * g.points + i) = std::sin(g.position(I, i + 1));
  return u;
}

}  // namespace

TEST_CASE("exact evolution, trivial cases") {
  AssembledOperator zero;
  zero.matrix = Matrix::Zero(3, 3);
  const Vector u0 = Vector::LinSpaced(3, 1, 3);
  const auto t = evolve_exact(zero, {u0, 0.0}, {0.5, 1.0});
  for (const auto& s : t.states) CHECK((s - u0).norm() < 1e-15);
  CHECK(evolve_exact(scalar(-2), {Vector::Ones(1), 0.0}, {1.0}).states[0](0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(evolve_exact(zero, {u0, 0.0}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(evolve_exact(zero, {Vector::Ones(2), 0.0}, {1.0}), InvalidArgument);
}

TEST_CASE("a sine decays at the slowest macroscale rate") {
  const auto g = build_grid_1d(2 * std::numbers::pi, 9, 5, 0.3);
  const auto op = nine_patches();
  const Vector u0 = sine_at_points(g);
  std::vector<double> times;
  for (int k = 1; k <= 10; ++k) times.push_back(0.1 * k);
  const auto traj = evolve_exact(op, {u0, 0.0}, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double ratio = traj.states[k].norm() / u0.norm();
    CHECK(ratio == doctest::Approx(std::exp(-0.9987 * times[k])).epsilon(0.01));
  }
}

TEST_CASE("exact trajectories satisfy the ODE") {
  const auto op = nine_patches();
  const auto g = build_grid_1d(2 * std::numbers::pi, 9, 5, 0.3);
  const Vector u0 = sine_at_points(g) + 0.1 * Vector::LinSpaced(45, -1, 1);
  const double t = 0.3, h = 1e-4;
  const auto traj = evolve_exact(op, {u0, 0.0}, {t - h, t, t + h});
  const Vector lu = op.matrix * traj.states[1];
  const Vector fd = (traj.states[2] - traj.states[0]) / (2 * h);
  CHECK((fd - lu).norm() <= 1e-8 * lu.norm() + 1e-6 * lu.norm());
}

TEST_CASE("exact trajectories conserve mass") {
  const auto op = nine_patches();
  const auto g = build_grid_1d(2 * std::numbers::pi, 9, 5, 0.3);
  const auto traj = evolve_exact(op, {sine_at_points(g).array() + 2.0, 0.0}, {0.1, 1.0, 10.0, 100.0});
  CHECK(conserved_mass(traj).relative_drift <= 1e-10);

  const auto flat = evolve_exact(op, {Vector::Constant(45, 1.5), 0.0}, {1.0, 5.0});
  // Eigenvector rounding leaks about eps ||L|| / |lambda_1| into decaying modes.
  for (const auto& s : flat.states) CHECK((s.array() - 1.5).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("rk4") {
  const auto z = evolve_rk4(scalar(0.0), {Vector::Ones(1), 0.0}, 0.1, 5);
  CHECK(z.size() == 6);
  for (const auto& s : z.states) CHECK(s(0) == 1.0);
  const auto e = evolve_rk4(scalar(-1.0), {Vector::Ones(1), 0.0}, 0.1, 10);
  CHECK(std::abs(e.states.back()(0) - std::exp(-1.0)) <= 1e-6);
  CHECK(e.times.back() == doctest::Approx(1.0));

  const auto op = nine_patches();
  const auto g = build_grid_1d(2 * std::numbers::pi, 9, 5, 0.3);
  const Vector u0 = sine_at_points(g);
  const auto rk = evolve_rk4(op, {u0, 0.0}, 1e-4, 1000, {.record_every = 100});
  CHECK(rk.size() == 11);
  const auto ex = evolve_exact(op, {u0, 0.0}, {0.1});
  CHECK((rk.states.back() - ex.states[0]).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(conserved_mass(rk).relative_drift <= 1e-8);
}

TEST_CASE("rk4 stability limit") {
  const auto op = nine_patches();
  const double limit = stability_limit(op.matrix);
  const double rho = -testing::sorted(testing::eigenvalues_of(op.matrix)).front();
  CHECK(limit <= 2.5 / rho * (1 + 1e-9));
  CHECK(limit >= 2.5 / rho * 0.99);
  CHECK_THROWS_AS(evolve_rk4(op, {Vector::Zero(45), 0.0}, 1.1 * limit, 1), InvalidArgument);
  CHECK_NOTHROW(evolve_rk4(op, {Vector::Zero(45), 0.0}, 1.1 * limit, 1, {.override_stability = true}));
}

TEST_CASE("damped wave energy does not grow") {
  const auto k = random_lognormal_profile(3, 0.5, 4);
  const auto g = build_grid_1d(36.0, 6, 3, 0.5);
  const auto op = assemble_wave_1d(g, k, CouplingSpec::spectral(), 0.02);
  const Eigen::Index m = op.size() / 2;
  const Matrix a = op.matrix.bottomLeftCorner(m, m);
  Vector state = Vector::Zero(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) state(i) = std::sin(0.3 * static_cast<double>(i)) + 0.2 * std::cos(1.7 * static_cast<double>(i));
  const double dt = 0.5 * stability_limit(op.matrix);
  const auto traj = evolve_rk4(op, {state, 0.0}, dt, 2000);
  double previous = wave_energy(a, traj.states.front());
  const double e0 = previous;
  for (std::size_t s = 1; s < traj.size(); ++s) {
    const double e = wave_energy(a, traj.states[s]);
    CHECK(e <= previous + 1e-6 * e0 * dt);
    previous = e;
  }
  CHECK(previous < e0);
  CHECK_THROWS_AS(wave_energy(a, Vector::Zero(m)), InvalidArgument);
}

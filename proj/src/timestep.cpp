#include "patchtooth/timestep.hpp"

#include <cmath>
#include <limits>

#include "patchtooth/spectra.hpp"

namespace patchtooth {

namespace {

void check_state(const AssembledOperator& op, const StateVector& u0) {
  if (u0.values.size() != op.size()) throw InvalidArgument("state length does not match the operator dimension");
}

void record(Trajectory& t, double time, const Vector& state) {
  t.times.push_back(time);
  t.states.push_back(state);
  t.mass.push_back(state.sum());
}

}  // namespace

Trajectory evolve_exact(const AssembledOperator& op, const StateVector& u0, const std::vector<double>& times) {
  check_state(op, u0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw InvalidArgument("snapshot times must be strictly increasing");
  }
  const Eigen::Index n = op.size();
  Vector offset = Vector::Zero(n);
  Matrix basis;
  SymmetricDecomposition eig;
  const double scale = op.matrix.cwiseAbs().maxCoeff();
  if (n > 1 && (op.matrix.rowwise().sum()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    // Constants are an exact null vector: split them off with a Householder
    // reflector so rounding in the other eigenvectors cannot move the mass.
    Vector v = Vector::Ones(n);
    v(0) += std::sqrt(static_cast<double>(n));
    const Matrix reflector = Matrix::Identity(n, n) - (2.0 / v.squaredNorm()) * v * v.transpose();
    const Matrix q = reflector.rightCols(n - 1);
    eig = decompose_symmetric(q.transpose() * op.matrix * q);
    basis = q * eig.vectors;
    offset.setConstant(u0.values.mean());
  } else {
    eig = decompose_symmetric(op.matrix);
    basis = eig.vectors;
  }
  const Vector coeffs = basis.transpose() * (u0.values - offset);
  Trajectory out;
  for (double t : times) {
    const double elapsed = t - u0.time;
    const Vector growth = (eig.values * elapsed).array().exp().matrix();
    record(out, t, offset + basis * coeffs.cwiseProduct(growth));
  }
  return out;
}

double spectral_norm_estimate(const Matrix& matrix) {
  const Eigen::Index n = matrix.cols();
  if (n == 0) return 0.0;
  Vector x(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(k));
  x.normalize();
  // Power iteration on B = M^T M. The bound theta + |Bx - theta x| errs on
  // the large side, so the step limit errs on the safe side.
  double bound = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    const Vector y = matrix.transpose() * (matrix * x);
    const double theta = x.dot(y);
    const double residual = (y - theta * x).norm();
    bound = theta + residual;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    if (residual <= 1e-10 * theta) break;
    x = y / norm;
  }
  return std::sqrt(bound);
}

double stability_limit(const Matrix& matrix) {
  const double norm = spectral_norm_estimate(matrix);
  return norm > 0.0 ? 2.5 / norm : std::numeric_limits<double>::infinity();
}

Trajectory evolve_rk4(const AssembledOperator& op, const StateVector& u0, double dt, int steps,
                      const Rk4Options& options) {
  check_state(op, u0);
  if (!(dt > 0.0) || steps < 0) throw InvalidArgument("rk4 needs dt > 0 and a nonnegative step count");
  if (options.record_every < 1) throw InvalidArgument("record interval must be positive");
  const double limit = stability_limit(op.matrix);
  if (dt > limit && !options.override_stability) {
    throw InvalidArgument("dt " + std::to_string(dt) + " exceeds the stability limit " + std::to_string(limit));
  }
  const Matrix& m = op.matrix;
  Trajectory out;
  Vector u = u0.values;
  record(out, u0.time, u);
  for (int s = 1; s <= steps; ++s) {
    const Vector k1 = m * u;
    const Vector k2 = m * (u + 0.5 * dt * k1);
    const Vector k3 = m * (u + 0.5 * dt * k2);
    const Vector k4 = m * (u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % options.record_every == 0 || s == steps) record(out, u0.time + s * dt, u);
  }
  return out;
}

MassReport conserved_mass(const Trajectory& trajectory) {
  MassReport report;
  report.sums = trajectory.mass;
  if (report.sums.empty()) return report;
  for (double s : report.sums) report.drift = std::max(report.drift, std::abs(s - report.sums.front()));
  const double scale = trajectory.states.empty() ? 0.0 : trajectory.states.front().lpNorm<1>();
  report.relative_drift = scale > 0.0 ? report.drift / scale : report.drift;
  return report;
}

double wave_energy(const Matrix& diffusion, const Vector& state) {
  const Eigen::Index m = diffusion.rows();
  if (state.size() != 2 * m) throw InvalidArgument("wave state must hold u and v");
  const auto u = state.head(m);
  const auto v = state.tail(m);
  return -u.dot(diffusion * u) + v.squaredNorm();
}

}  // namespace patchtooth

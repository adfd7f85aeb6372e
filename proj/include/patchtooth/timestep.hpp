#pragma once

#include <vector>

#include "patchtooth/common.hpp"

namespace patchtooth {

struct StateVector {
  Vector values;
  double time = 0.0;
};

/// Snapshots at strictly increasing times with the total sum of each.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> mass;

  std::size_t size() const { return times.size(); }
};

/// u(t) = Q exp(Lambda t) Q^T u0 for symmetric L. `times` must be strictly
/// increasing; t = 0 is not implied.
Trajectory evolve_exact(const AssembledOperator& op, const StateVector& u0, const std::vector<double>& times);

/// ||M||_2 by power iteration on M^T M from a fixed start vector, rounded
/// up by the residual of the final iterate.
double spectral_norm_estimate(const Matrix& matrix);

/// 2.5 / ||M||_2, which never exceeds 2.5 / rho(M).
double stability_limit(const Matrix& matrix);

struct Rk4Options {
  /// Accept dt above the stability limit.
  bool override_stability = false;
  /// Keep every k-th step (the initial and final states are always kept).
  int record_every = 1;
};

/// Classical fourth-order Runge-Kutta with fixed step. Throws
/// InvalidArgument when dt exceeds the stability limit without override.
Trajectory evolve_rk4(const AssembledOperator& op, const StateVector& u0, double dt, int steps,
                      const Rk4Options& options = {});

struct MassReport {
  std::vector<double> sums;
  double drift = 0.0;           // max |sum_k - sum_0|
  double relative_drift = 0.0;  // drift / sum|u_0|, the rounding scale of a sum
};

MassReport conserved_mass(const Trajectory& trajectory);

/// -u^T A u + v^T v for a stacked (u, v) state of the wave system.
double wave_energy(const Matrix& diffusion, const Vector& state);

}  // namespace patchtooth

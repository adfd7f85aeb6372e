#include "patchtooth/ensemble.hpp"

#include <cmath>

namespace patchtooth {

EnsembleSpec1D build_ensemble_1d(const DiffusivityProfile1D& profile) { return EnsembleSpec1D{profile}; }

int left_edge_source(int member, int points, int period) {
  return static_cast<int>(wrap(member - points, period));
}

int right_edge_source(int member, int points, int period) {
  return static_cast<int>(wrap(member + points, period));
}

Matrix build_shift_matrix(const DiffusivityProfile1D& profile, int points) {
  if (points < 1) throw InvalidArgument("patch size n must be at least 1");
  const int p = profile.period();
  Matrix k = Matrix::Zero(p, p);
  for (int l = 0; l < p; ++l) k(l, left_edge_source(l, points, p)) = profile.at(l);
  return k;
}

Permutations2D build_permutations_2d(const DiffusivityProfile2D& profile, int points_x, int points_y) {
  if (points_x < 1 || points_y < 1) throw InvalidArgument("patch sizes must be at least 1");
  const int px = profile.period_x();
  const int py = profile.period_y();
  const int p = px * py;
  Permutations2D out{Matrix::Zero(p, p), Matrix::Zero(p, p)};
  for (int phi = 0; phi < px; ++phi) {
    for (int psi = 0; psi < py; ++psi) {
      const int m = phi * py + psi;
      out.x(m, left_edge_source(phi, points_x, px) * py + psi) = 1.0;
      out.y(m, phi * py + left_edge_source(psi, points_y, py)) = 1.0;
    }
  }

  // kappa_left = P kappa_right must hold for every row (x) / column (y) of the cell.
  for (int row = 0; row < std::max(px, py); ++row) {
    Vector left_x(p), right_x(p), bottom_y(p), top_y(p);
    for (int phi = 0; phi < px; ++phi) {
      for (int psi = 0; psi < py; ++psi) {
        const int m = phi * py + psi;
        left_x[m] = profile.kx(phi, row + psi);
        right_x[m] = profile.kx(points_x + phi, row + psi);
        bottom_y[m] = profile.ky(row + phi, psi);
        top_y[m] = profile.ky(row + phi, points_y + psi);
      }
    }
    if ((out.x * right_x - left_x).cwiseAbs().maxCoeff() != 0.0 ||
        (out.y * top_y - bottom_y).cwiseAbs().maxCoeff() != 0.0) {
      throw NumericalError("ensemble permutation fails the edge-diffusivity matching identity");
    }
  }
  return out;
}

EnsembleSpec2D build_ensemble_2d(const DiffusivityProfile2D& profile, int points_x, int points_y) {
  auto perms = build_permutations_2d(profile, points_x, points_y);
  return EnsembleSpec2D{profile, points_x, points_y, std::move(perms.x), std::move(perms.y)};
}

Vector ensemble_mean(const Vector& state, int members) {
  if (members < 1 || state.size() % members != 0) {
    throw InvalidArgument("state length must be a multiple of the member count");
  }
  const Eigen::Index points = state.size() / members;
  return state.reshaped(members, points).colwise().mean().transpose();
}

}  // namespace patchtooth

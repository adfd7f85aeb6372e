#pragma once

#include <vector>

#include "patchtooth/microscale.hpp"

namespace patchtooth {

/// All p phase shifts of a periodic 1D profile. Member l sees diffusivity
/// base.at(m + l) on link m+1/2; member 0 is the base profile.
struct EnsembleSpec1D {
  DiffusivityProfile1D base;

  int members() const { return base.period(); }
  double kappa(int member, long half_index) const { return base.at(half_index + member); }
  DiffusivityProfile1D member_profile(int member) const { return base.shifted(member); }
};

EnsembleSpec1D build_ensemble_1d(const DiffusivityProfile1D& profile);

/// Member whose right-next-to-edge values feed the left edge of `member`
/// for patches of n interior points: the member whose right-edge
/// diffusivity equals this member's left-edge diffusivity, (member - n) mod p.
int left_edge_source(int member, int points, int period);
/// Member whose left-next-to-edge values feed the right edge: (member + n) mod p.
int right_edge_source(int member, int points, int period);

/// The p-by-p coupling weight matrix K of the 1D ensemble: zero except
/// K(l, (l - n) mod p) = kappa_{l+1/2}. Left-edge coupling blocks are
/// K times the scalar weights and right-edge blocks K^T times them, which
/// keeps the ensemble operator symmetric and its rows summing to zero.
Matrix build_shift_matrix(const DiffusivityProfile1D& profile, int points);

/// 2D ensemble of all px * py phase shifts. Member (phi, psi) has index
/// phi * py + psi and sees kx(i + phi, j + psi), ky(i + phi, j + psi).
struct EnsembleSpec2D {
  DiffusivityProfile2D base;
  int points_x = 1;
  int points_y = 1;
  /// perm_x(m, s) = 1 when the left edge of member m is fed from the
  /// right-next-to-edge values of member s, so kappa_left = perm_x kappa_right.
  Matrix perm_x;
  /// Same for bottom edges fed from top-next-to-edge values.
  Matrix perm_y;

  int members() const { return base.period_x() * base.period_y(); }
  int member_index(int phi, int psi) const { return phi * base.period_y() + psi; }
};

struct Permutations2D {
  Matrix x;
  Matrix y;
};

/// Builds the member permutations and verifies the edge-diffusivity
/// matching identities for every lattice row; throws NumericalError if a
/// check fails.
Permutations2D build_permutations_2d(const DiffusivityProfile2D& profile, int points_x, int points_y);

EnsembleSpec2D build_ensemble_2d(const DiffusivityProfile2D& profile, int points_x, int points_y);

/// Pointwise mean over members of a member-innermost state vector.
Vector ensemble_mean(const Vector& state, int members);

}  // namespace patchtooth

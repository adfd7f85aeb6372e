#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace patchtooth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition (bad config, shape mismatch).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition failed at run time, e.g. a matrix that should be
/// symmetric is not, or a fit that should be clean is contaminated.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Floor-safe modulus: result always lies in [0, m).
inline long wrap(long value, long m) {
  const long r = value % m;
  return r < 0 ? r + m : r;
}

/// Describes how the unknowns of an assembled operator are ordered.
///
/// Unknown index, zero based:
///   ((((field * Ny + J) * Nx + I) * ny + j) * nx + i) * members + member
/// so the ensemble member is innermost, then the x-interior index i, then the
/// y-interior index j, then patch I along x, then patch J along y. A full
/// microscale lattice is the special case Nx = Ny = 1 with nx = Mx, ny = My.
/// The wave system stacks two such blocks (u first, then v) via `fields`.
struct OperatorLayout {
  int dimension = 1;  // spatial dimension, 1 or 2
  int patches_x = 1;
  int patches_y = 1;
  int points_x = 1;
  int points_y = 1;
  int members = 1;
  int fields = 1;

  std::size_t field_size() const {
    return static_cast<std::size_t>(patches_x) * patches_y * points_x * points_y * members;
  }
  std::size_t size() const { return field_size() * static_cast<std::size_t>(fields); }

  /// Zero-based patch (I, J), interior point (i, j), member, and field.
  std::size_t index(int I, int J, int i, int j, int member = 0, int field = 0) const {
    std::size_t a = static_cast<std::size_t>(field);
    a = a * patches_y + J;
    a = a * patches_x + I;
    a = a * points_y + j;
    a = a * points_x + i;
    return a * members + member;
  }
};

/// Dense linear operator over all patch-interior (or lattice) unknowns.
struct AssembledOperator {
  Matrix matrix;
  OperatorLayout layout;
  /// Dimension of the slow (macroscale) subspace; 0 when not meaningful.
  int macro_modes = 0;
  /// Columns spanning a subspace known to be exactly invariant under `matrix`
  /// (empty when none is recorded). Used to deflate defective zero modes.
  Matrix invariant_subspace;

  Eigen::Index size() const { return matrix.rows(); }
};

}  // namespace patchtooth

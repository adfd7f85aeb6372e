#include "patchtooth/assembly.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

namespace patchtooth {

namespace {

// Column holding the single nonzero of row `row`.
int nonzero_column(const Matrix& m, int row) {
  for (int c = 0; c < m.cols(); ++c)
    if (m(row, c) != 0.0) return c;
  throw NumericalError("coupling matrix row without a nonzero entry");
}

void reject_incompatible(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Diagnostic::Severity::Error) throw InvalidArgument(d.field + ": " + d.message);
  }
}

}  // namespace

AssembledOperator assemble_patch_1d(const PatchGrid1D& grid, const DiffusivityProfile1D& profile,
                                    const CouplingSpec& coupling, const AssemblyOptions& options) {
  if (!options.allow_asymmetric) reject_incompatible(validate_compatibility(grid, profile, options.ensemble));

  const int N = grid.patches;
  const int n = grid.points;
  const int p = profile.period();
  const int members = options.ensemble ? p : 1;
  const auto weights = make_weights(coupling, N, grid.ratio);

  AssembledOperator op;
  op.layout.patches_x = N;
  op.layout.points_x = n;
  op.layout.members = members;
  op.macro_modes = options.ensemble ? N * std::gcd(n, p) : N;
  const auto size = static_cast<Eigen::Index>(op.layout.size());
  op.matrix = Matrix::Zero(size, size);

  // Ensemble: left edges couple through K, right edges through K^T.
  const Matrix shift = options.ensemble ? build_shift_matrix(profile, n) : Matrix();
  std::vector<int> left_source(members, 0);
  std::vector<int> right_source(members, 0);
  std::vector<double> left_kappa(members, profile.at(0));
  std::vector<double> right_kappa(members, profile.at(n));
  if (options.ensemble) {
    const Matrix shift_t = shift.transpose();
    for (int l = 0; l < members; ++l) {
      left_source[l] = nonzero_column(shift, l);
      left_kappa[l] = shift(l, left_source[l]);
      right_source[l] = nonzero_column(shift_t, l);
      right_kappa[l] = shift_t(l, right_source[l]);
    }
  }

  auto idx = [&](int I, int i, int member) {
    return static_cast<Eigen::Index>(op.layout.index(I, 0, i, 0, member));
  };
  for (int I = 0; I < N; ++I) {
    for (int i = 1; i <= n; ++i) {
      for (int l = 0; l < members; ++l) {
        const auto a = idx(I, i - 1, l);
        const double k_left = profile.at(i - 1 + l);
        const double k_right = profile.at(i + l);
        op.matrix(a, a) -= k_left + k_right;
        if (i > 1) {
          op.matrix(a, idx(I, i - 2, l)) += k_left;
        } else {
          for (int J = 0; J < N; ++J)
            op.matrix(a, idx(J, n - 1, left_source[l])) += left_kappa[l] * weights.left_at(J - I);
        }
        if (i < n) {
          op.matrix(a, idx(I, i, l)) += k_right;
        } else {
          for (int J = 0; J < N; ++J)
            op.matrix(a, idx(J, 0, right_source[l])) += right_kappa[l] * weights.right_at(J - I);
        }
      }
    }
  }
  const double d = grid.spacing();
  op.matrix /= d * d;
  return op;
}

AssembledOperator assemble_patch_2d(const PatchGrid2D& grid, const DiffusivityProfile2D& profile,
                                    const CouplingSpec& coupling_x, const CouplingSpec& coupling_y,
                                    const AssemblyOptions& options) {
  if (!options.allow_asymmetric) reject_incompatible(validate_compatibility(grid, profile, options.ensemble));

  const int Nx = grid.x.patches, Ny = grid.y.patches;
  const int nx = grid.x.points, ny = grid.y.points;
  const int px = profile.period_x(), py = profile.period_y();
  const int members = options.ensemble ? px * py : 1;
  const auto wx = make_weights(coupling_x, Nx, grid.x.ratio);
  const auto wy = make_weights(coupling_y, Ny, grid.y.ratio);

  AssembledOperator op;
  op.layout.dimension = 2;
  op.layout.patches_x = Nx;
  op.layout.patches_y = Ny;
  op.layout.points_x = nx;
  op.layout.points_y = ny;
  op.layout.members = members;
  op.macro_modes = options.ensemble ? Nx * Ny * std::gcd(nx, px) * std::gcd(ny, py) : Nx * Ny;
  const auto size = static_cast<Eigen::Index>(op.layout.size());
  op.matrix = Matrix::Zero(size, size);

  // Source member feeding each edge; identity for a single phase.
  std::vector<int> left_src(members, 0), right_src(members, 0), bottom_src(members, 0), top_src(members, 0);
  if (options.ensemble) {
    const auto ens = build_ensemble_2d(profile, nx, ny);
    const Matrix px_t = ens.perm_x.transpose();
    const Matrix py_t = ens.perm_y.transpose();
    for (int m = 0; m < members; ++m) {
      left_src[m] = nonzero_column(ens.perm_x, m);
      right_src[m] = nonzero_column(px_t, m);
      bottom_src[m] = nonzero_column(ens.perm_y, m);
      top_src[m] = nonzero_column(py_t, m);
    }
  }

  const double sx = 1.0 / (grid.x.spacing() * grid.x.spacing());
  const double sy = 1.0 / (grid.y.spacing() * grid.y.spacing());
  auto idx = [&](int I, int J, int i, int j, int member) {
    return static_cast<Eigen::Index>(op.layout.index(I, J, i, j, member));
  };
  for (int J = 0; J < Ny; ++J) {
    for (int I = 0; I < Nx; ++I) {
      for (int j = 1; j <= ny; ++j) {
        for (int i = 1; i <= nx; ++i) {
          for (int m = 0; m < members; ++m) {
            const int phi = options.ensemble ? m / py : 0;
            const int psi = options.ensemble ? m % py : 0;
            const double west = profile.kx(i - 1 + phi, j + psi) * sx;
            const double east = profile.kx(i + phi, j + psi) * sx;
            const double south = profile.ky(i + phi, j - 1 + psi) * sy;
            const double north = profile.ky(i + phi, j + psi) * sy;
            const auto a = idx(I, J, i - 1, j - 1, m);
            op.matrix(a, a) -= west + east + south + north;

            if (i > 1) {
              op.matrix(a, idx(I, J, i - 2, j - 1, m)) += west;
            } else {
              for (int K = 0; K < Nx; ++K)
                op.matrix(a, idx(K, J, nx - 1, j - 1, left_src[m])) += west * wx.left_at(K - I);
            }
            if (i < nx) {
              op.matrix(a, idx(I, J, i, j - 1, m)) += east;
            } else {
              for (int K = 0; K < Nx; ++K)
                op.matrix(a, idx(K, J, 0, j - 1, right_src[m])) += east * wx.right_at(K - I);
            }
            if (j > 1) {
              op.matrix(a, idx(I, J, i - 1, j - 2, m)) += south;
            } else {
              for (int K = 0; K < Ny; ++K)
                op.matrix(a, idx(I, K, i - 1, ny - 1, bottom_src[m])) += south * wy.left_at(K - J);
            }
            if (j < ny) {
              op.matrix(a, idx(I, J, i - 1, j, m)) += north;
            } else {
              for (int K = 0; K < Ny; ++K)
                op.matrix(a, idx(I, K, i - 1, 0, top_src[m])) += north * wy.right_at(K - J);
            }
          }
        }
      }
    }
  }
  return op;
}

AssembledOperator assemble_wave(const AssembledOperator& diffusion, const AssembledOperator& damping, double eps) {
  const Eigen::Index m = diffusion.size();
  if (damping.size() != m || diffusion.matrix.cols() != m || damping.matrix.cols() != m) {
    throw InvalidArgument("wave operator blocks must be square with equal dimensions");
  }
  AssembledOperator op;
  op.layout = diffusion.layout;
  op.layout.fields = 2;
  op.macro_modes = 2 * diffusion.macro_modes;
  op.matrix = Matrix::Zero(2 * m, 2 * m);
  op.matrix.topRightCorner(m, m).setIdentity();
  op.matrix.bottomLeftCorner(m, m) = diffusion.matrix;
  op.matrix.bottomRightCorner(m, m) = eps * damping.matrix;

  // Constants in both kernels make span{(1,0), (0,1)} invariant (a Jordan
  // block at zero); record it so eigensolvers can split it off exactly.
  if (kernel_residual(diffusion.matrix) <= 1e-12 && kernel_residual(damping.matrix) <= 1e-12) {
    op.invariant_subspace = Matrix::Zero(2 * m, 2);
    op.invariant_subspace.col(0).head(m).setOnes();
    op.invariant_subspace.col(1).tail(m).setOnes();
  }
  return op;
}

AssembledOperator assemble_wave_1d(const PatchGrid1D& grid, const DiffusivityProfile1D& profile,
                                   const CouplingSpec& coupling, double eps, const AssemblyOptions& options) {
  const auto diffusion = assemble_patch_1d(grid, profile, coupling, options);
  AssemblyOptions unit = options;
  unit.ensemble = false;
  auto damping = assemble_patch_1d(grid, DiffusivityProfile1D({1.0}), coupling, unit);
  if (options.ensemble && profile.period() > 1) {
    // Unit diffusivity is phase independent: one copy per member.
    const int p = profile.period();
    Matrix expanded = Matrix::Zero(damping.size() * p, damping.size() * p);
    for (Eigen::Index a = 0; a < damping.size(); ++a)
      for (Eigen::Index b = 0; b < damping.size(); ++b)
        for (int l = 0; l < p; ++l) expanded(a * p + l, b * p + l) = damping.matrix(a, b);
    damping.matrix = std::move(expanded);
  }
  return assemble_wave(diffusion, damping, eps);
}

SymmetryReport symmetry_defect(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("symmetry defect needs a square matrix");
  SymmetryReport report;
  if (matrix.size() == 0) return report;
  report.defect = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  report.scale = matrix.cwiseAbs().maxCoeff();
  report.relative = report.scale > 0.0 ? report.defect / report.scale : 0.0;
  return report;
}

double kernel_residual(const Matrix& matrix) {
  const double scale = matrix.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (matrix * Vector::Ones(matrix.cols())).cwiseAbs().maxCoeff() / scale;
}

void write_matrix_csv(std::ostream& out, const Matrix& matrix) {
  char buffer[64];
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c) out << ',';
      const auto end = std::to_chars(buffer, buffer + sizeof(buffer), matrix(r, c)).ptr;
      out.write(buffer, end - buffer);
    }
    out << '\n';
  }
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw InvalidArgument("truncated matrix dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_matrix_binary(std::ostream& out, const Matrix& matrix) {
  out.write("PTOP", 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.cols()));
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) put_le<double>(out, matrix(r, c));
}

Matrix read_matrix_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PTOP", 4) != 0) throw InvalidArgument("not a PTOP matrix dump");
  if (get_le<std::uint32_t>(in) != 1) throw InvalidArgument("unsupported PTOP version");
  const auto rows = static_cast<Eigen::Index>(get_le<std::uint64_t>(in));
  const auto cols = static_cast<Eigen::Index>(get_le<std::uint64_t>(in));
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = get_le<double>(in);
  return m;
}

}  // namespace patchtooth

#pragma once

#include <iosfwd>

#include "patchtooth/coupling.hpp"
#include "patchtooth/ensemble.hpp"
#include "patchtooth/geometry.hpp"

namespace patchtooth {

struct AssemblyOptions {
  /// Simulate the ensemble of all phase shifts; any patch size is then admissible.
  bool ensemble = false;
  /// Assemble single-phase operators even when n is not a multiple of the
  /// period. The result is not symmetric; useful only as a counterexample.
  bool allow_asymmetric = false;
};

/// L = D + C for 1D patches: the microscale ODEs on every interior point,
/// with edge values eliminated through the coupling weights, scaled by 1/d^2.
AssembledOperator assemble_patch_1d(const PatchGrid1D& grid, const DiffusivityProfile1D& profile,
                                    const CouplingSpec& coupling, const AssemblyOptions& options = {});

/// 2D patches: x-edges eliminated with x weights at fixed j, y-edges with y
/// weights at fixed i. Corner edge values never enter the five-point stencil.
AssembledOperator assemble_patch_2d(const PatchGrid2D& grid, const DiffusivityProfile2D& profile,
                                    const CouplingSpec& coupling_x, const CouplingSpec& coupling_y,
                                    const AssemblyOptions& options = {});

/// First-order form of the weakly damped wave u' = v, v' = A u + eps B v:
/// the block matrix [[0, I], [A, eps B]] over (u, v).
AssembledOperator assemble_wave(const AssembledOperator& diffusion, const AssembledOperator& damping, double eps);

/// Wave system on 1D patches; the damping operator B is the same patch
/// assembly with unit diffusivity.
AssembledOperator assemble_wave_1d(const PatchGrid1D& grid, const DiffusivityProfile1D& profile,
                                   const CouplingSpec& coupling, double eps = 0.02,
                                   const AssemblyOptions& options = {});

struct SymmetryReport {
  double defect = 0.0;    // max |L(a,b) - L(b,a)|
  double scale = 0.0;     // max |L(a,b)|
  double relative = 0.0;  // defect / scale (0 for the zero matrix)
};

SymmetryReport symmetry_defect(const Matrix& matrix);
inline SymmetryReport symmetry_defect(const AssembledOperator& op) { return symmetry_defect(op.matrix); }

/// max |L 1| relative to max |L(a,b)|.
double kernel_residual(const Matrix& matrix);

/// Plain CSV, one matrix row per line, shortest round-trip decimals.
void write_matrix_csv(std::ostream& out, const Matrix& matrix);

/// Binary dump: 4-byte magic "PTOP", uint32 version 1, uint64 rows,
/// uint64 cols, then rows*cols little-endian IEEE-754 doubles, row-major.
void write_matrix_binary(std::ostream& out, const Matrix& matrix);
Matrix read_matrix_binary(std::istream& in);

}  // namespace patchtooth

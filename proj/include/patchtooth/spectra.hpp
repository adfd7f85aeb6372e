#pragma once

#include <complex>
#include <vector>

#include "patchtooth/common.hpp"

namespace patchtooth {

struct SpectrumReport {
  /// Sorted by ascending magnitude (ties: algebraically larger first).
  std::vector<double> eigenvalues;
  /// The first macro_count eigenvalues are the macroscale modes.
  int macro_count = 0;
  /// |first micro| / |largest-magnitude macro|; 0 when there is no micro part.
  double gap_ratio = 0.0;
  double zero_mode_magnitude = 0.0;

  std::vector<double> macro() const;
  std::vector<double> micro() const;
};

struct SymmetricEigenOptions {
  /// Macroscale mode count; negative means "use the operator's macro_modes".
  int macro_count = -1;
  /// Recompute the macroscale eigenvalues by a Rayleigh-Ritz step in
  /// extended precision on the computed macroscale eigenvectors. Removes the
  /// eps * ||L|| absolute floor from small-magnitude eigenvalues.
  bool refine_macro = true;
  /// Relative symmetry defect above which the symmetric path is refused.
  double symmetry_tolerance = 1e-10;
};

/// L = Q diag(values) Q^T with values ascending.
struct SymmetricDecomposition {
  Vector values;
  Matrix vectors;
};

/// Throws NumericalError when the relative symmetry defect exceeds `tolerance`.
SymmetricDecomposition decompose_symmetric(const Matrix& matrix, double tolerance = 1e-10);

SpectrumReport eigen_symmetric(const AssembledOperator& op, const SymmetricEigenOptions& options = {});

/// Orders `values` by magnitude and fills the gap and zero-mode fields.
SpectrumReport make_report(std::vector<double> values, int macro_count);

struct ComplexSpectrum {
  /// Sorted by ascending magnitude, then by real part, then by imaginary part.
  std::vector<std::complex<double>> eigenvalues;

  double max_real() const;
  double max_abs_real() const;
  double max_abs_imag() const;
};

/// General real eigenproblem. A recorded invariant subspace is split off
/// exactly through an orthogonal change of basis; the rest is balanced
/// (diagonal similarity by powers of two) before the QR algorithm.
ComplexSpectrum eigen_general(const AssembledOperator& op);
ComplexSpectrum eigen_general(const Matrix& matrix);

/// Balances `matrix` in place and returns the diagonal scaling D, so the
/// result is D^-1 A D.
Vector balance(Matrix& matrix);

/// Nonzero values (|v| > zero_tolerance * max|v|) ordered by magnitude, with
/// runs whose magnitudes lie within `threshold` of the run's first member
/// merged into their mean.
std::vector<double> collapse_unique(const std::vector<double>& values, double threshold = 0.005,
                                    double zero_tolerance = 1e-8);

struct ErrorRow {
  int mode = 0;  // 1-based rank among unique nonzero macroscale eigenvalues
  double test = 0.0;
  double reference = 0.0;
  double relative_error = 0.0;
};

using ErrorTable = std::vector<ErrorRow>;

/// Pairs the first `count` unique nonzero macroscale eigenvalues of each
/// report by magnitude rank. Throws InvalidArgument when either has fewer.
ErrorTable error_table(const SpectrumReport& test, const SpectrumReport& reference, int count);

/// Least-squares slope of log(error) against log(x).
double convergence_slope(const std::vector<double>& x, const std::vector<double>& errors);

/// max |a_k - b_k| / max(|a|, |b|) after sorting both ascending; the two
/// spectra are compared as multisets. Throws InvalidArgument on size mismatch.
double compare_spectra(std::vector<double> a, std::vector<double> b);

}  // namespace patchtooth

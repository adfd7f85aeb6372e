#pragma once

#include <vector>

#include "patchtooth/microscale.hpp"

namespace patchtooth {

using ComplexMatrix = Eigen::MatrixXcd;

/// p-by-p Hermitian matrix governing Bloch waves u_m = U_{m mod p} e^{ikm}
/// of the periodic lattice, in d^2 du/dt scaling (divide by d^2 for rates).
struct FourierSymbol {
  double k = 0.0;
  ComplexMatrix matrix;
};

FourierSymbol fourier_symbol(const DiffusivityProfile1D& profile, double k);

/// 2D analogue over the px-by-py cell, member (phi, psi) at index
/// phi * py + psi; the spacings are included, so this is du/dt itself.
ComplexMatrix fourier_symbol_2d(const DiffusivityProfile2D& profile, double kx, double ky, double dx, double dy);

/// Smallest-magnitude eigenvalue of the symbol (d^2 scaling). Throws
/// NumericalError when it lies closer than half the k = 0 gap to the next one.
double slow_branch(const DiffusivityProfile1D& profile, double k);

struct FitOptions {
  /// Wavenumbers sampled for the fit; empty selects 8 equispaced nodes
  /// 0.03 s m, m = 1..8, with s = min(1, sqrt(gap0 / K2) / 2).
  std::vector<double> nodes;
  /// Highest even power of k in the fit polynomial.
  int max_power = 12;
};

struct HomogenisedCoefficients {
  double K2 = 0.0;
  double K4 = 0.0;
  double beta = 0.0;
  double d = 0.0;
  /// Max fit residual relative to K2 * k_max^2.
  double fit_residual = 0.0;
};

/// The automatic fit nodes described in FitOptions.
std::vector<double> default_fit_nodes(const DiffusivityProfile1D& profile);

/// K2 = p / sum(1/kappa); K4 from an even least-squares fit of the slow
/// branch; beta = 2 pi^2 min(kappa) / (p^2 d^2).
HomogenisedCoefficients extract_coefficients(const DiffusivityProfile1D& profile, double d,
                                             const FitOptions& options = {});

/// lambda = -K2 q^2 + K4 d^2 q^4 for each physical wavenumber q.
std::vector<double> predict_macroscale_eigenvalues(const HomogenisedCoefficients& coeffs,
                                                   const std::vector<double>& wavenumbers);

/// Samples (k, slow eigenvalue) for export.
std::vector<std::pair<double, double>> sample_slow_branch(const DiffusivityProfile1D& profile,
                                                          const std::vector<double>& ks);

/// Spectrum of full_lattice_operator_1d(profile, points, spacing) assembled
/// from the symbols at the points / p admissible Bloch wavenumbers.
std::vector<double> lattice_spectrum_via_symbol_1d(const DiffusivityProfile1D& profile, int points, double spacing);

std::vector<double> lattice_spectrum_via_symbol_2d(const DiffusivityProfile2D& profile, int points_x, int points_y,
                                                   double spacing_x, double spacing_y);

/// Slow-branch lattice eigenvalues at the centred wavenumbers a patch grid of
/// N patches resolves, in ascending order of magnitude.
std::vector<double> lattice_macro_spectrum_1d(const DiffusivityProfile1D& profile, int points, double spacing,
                                              int patches);

std::vector<double> lattice_macro_spectrum_2d(const DiffusivityProfile2D& profile, int points_x, int points_y,
                                              double spacing_x, double spacing_y, int patches_x, int patches_y);

}  // namespace patchtooth

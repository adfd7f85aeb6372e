#include "patchtooth/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace patchtooth {

namespace {

using cd = std::complex<double>;

std::vector<double> symbol_values(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symbol eigensolver did not converge");
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

double zero_gap(const DiffusivityProfile1D& profile) {
  if (profile.period() == 1) return 4.0 * profile.at(0);
  const auto values = symbol_values(fourier_symbol(profile, 0.0).matrix);
  return std::abs(values[values.size() - 2]);
}

}  // namespace

FourierSymbol fourier_symbol(const DiffusivityProfile1D& profile, double k) {
  const int p = profile.period();
  FourierSymbol s{k, ComplexMatrix::Zero(p, p)};
  const cd forward = std::polar(1.0, k);
  for (int l = 0; l < p; ++l) {
    const double right = profile.at(l);
    const double left = profile.at(l - 1);
    s.matrix(l, l) -= right + left;
    // Accumulate: for p = 1 or 2 both neighbours land on the same entry.
    s.matrix(l, wrap(l + 1, p)) += right * forward;
    s.matrix(l, wrap(l - 1, p)) += left * std::conj(forward);
  }
  return s;
}

ComplexMatrix fourier_symbol_2d(const DiffusivityProfile2D& profile, double kx, double ky, double dx, double dy) {
  const int px = profile.period_x(), py = profile.period_y();
  ComplexMatrix m = ComplexMatrix::Zero(px * py, px * py);
  const double sx = 1.0 / (dx * dx), sy = 1.0 / (dy * dy);
  const cd ex = std::polar(1.0, kx), ey = std::polar(1.0, ky);
  auto at = [py](long phi, long psi, int pxx, int pyy) { return wrap(phi, pxx) * py + wrap(psi, pyy); };
  for (int phi = 0; phi < px; ++phi) {
    for (int psi = 0; psi < py; ++psi) {
      const long a = at(phi, psi, px, py);
      const double east = profile.kx(phi, psi) * sx, west = profile.kx(phi - 1, psi) * sx;
      const double north = profile.ky(phi, psi) * sy, south = profile.ky(phi, psi - 1) * sy;
      m(a, a) -= east + west + north + south;
      m(a, at(phi + 1, psi, px, py)) += east * ex;
      m(a, at(phi - 1, psi, px, py)) += west * std::conj(ex);
      m(a, at(phi, psi + 1, px, py)) += north * ey;
      m(a, at(phi, psi - 1, px, py)) += south * std::conj(ey);
    }
  }
  return m;
}

double slow_branch(const DiffusivityProfile1D& profile, double k) {
  const auto values = symbol_values(fourier_symbol(profile, k).matrix);
  const double slow = values.back();
  if (values.size() > 1) {
    const double separation = slow - values[values.size() - 2];
    if (separation < 0.5 * zero_gap(profile)) {
      throw NumericalError("slow branch not separated at k = " + std::to_string(k));
    }
  }
  return slow;
}

std::vector<double> default_fit_nodes(const DiffusivityProfile1D& profile) {
  double inverse_sum = 0.0;
  for (double v : profile.values()) inverse_sum += 1.0 / v;
  const double k2 = profile.period() / inverse_sum;
  const double s = std::min(1.0, std::sqrt(zero_gap(profile) / k2) / 2.0);
  std::vector<double> nodes;
  for (int m = 1; m <= 8; ++m) nodes.push_back(0.03 * s * m);
  return nodes;
}

HomogenisedCoefficients extract_coefficients(const DiffusivityProfile1D& profile, double d,
                                             const FitOptions& options) {
  if (!(d > 0.0)) throw InvalidArgument("spacing must be positive");
  if (options.max_power < 4 || options.max_power % 2 != 0) {
    throw InvalidArgument("fit degree must be an even number of at least 4");
  }
  const int p = profile.period();
  double inverse_sum = 0.0;
  double kappa_min = profile.at(0);
  for (double v : profile.values()) {
    inverse_sum += 1.0 / v;
    kappa_min = std::min(kappa_min, v);
  }

  HomogenisedCoefficients out;
  out.d = d;
  out.K2 = p / inverse_sum;
  out.beta = 2.0 * std::numbers::pi * std::numbers::pi * kappa_min / (p * p * d * d);

  const std::vector<double> nodes = options.nodes.empty() ? default_fit_nodes(profile) : options.nodes;
  const int terms = options.max_power / 2;
  if (static_cast<int>(nodes.size()) < terms) throw InvalidArgument("fewer fit nodes than fit terms");

  double kmax = 0.0;
  for (double k : nodes) kmax = std::max(kmax, std::abs(k));
  // Fit in t = k / kmax so the columns are well scaled.
  Matrix design(nodes.size(), terms);
  Vector samples(nodes.size());
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    const double t2 = (nodes[r] / kmax) * (nodes[r] / kmax);
    double power = t2;
    for (int c = 0; c < terms; ++c) {
      design(r, c) = power;
      power *= t2;
    }
    samples(r) = slow_branch(profile, nodes[r]);
  }
  const Vector coef = design.colPivHouseholderQr().solve(samples);
  const double fitted_k2 = -coef(0) / (kmax * kmax);
  out.K4 = coef(1) / std::pow(kmax, 4);
  out.fit_residual = (design * coef - samples).cwiseAbs().maxCoeff() / (out.K2 * kmax * kmax);

  if (std::abs(fitted_k2 - out.K2) > 1e-9 * out.K2) {
    throw NumericalError("slow-branch fit disagrees with the harmonic mean (K2 " + std::to_string(fitted_k2) +
                         " vs " + std::to_string(out.K2) + ")");
  }
  if (out.fit_residual > 1e-10) throw NumericalError("slow-branch fit residual too large; branch contaminated");
  return out;
}

std::vector<double> predict_macroscale_eigenvalues(const HomogenisedCoefficients& coeffs,
                                                   const std::vector<double>& wavenumbers) {
  std::vector<double> out;
  out.reserve(wavenumbers.size());
  for (double q : wavenumbers) {
    const double q2 = q * q;
    out.push_back(-coeffs.K2 * q2 + coeffs.K4 * coeffs.d * coeffs.d * q2 * q2);
  }
  return out;
}

std::vector<std::pair<double, double>> sample_slow_branch(const DiffusivityProfile1D& profile,
                                                          const std::vector<double>& ks) {
  std::vector<std::pair<double, double>> out;
  for (double k : ks) out.emplace_back(k, slow_branch(profile, k));
  return out;
}

std::vector<double> lattice_spectrum_via_symbol_1d(const DiffusivityProfile1D& profile, int points, double spacing) {
  const int p = profile.period();
  if (points < p || points % p != 0) throw InvalidArgument("lattice size must be a multiple of the period");
  std::vector<double> out;
  for (int m = 0; m < points / p; ++m) {
    const double k = 2.0 * std::numbers::pi * m / points;
    for (double v : symbol_values(fourier_symbol(profile, k).matrix)) out.push_back(v / (spacing * spacing));
  }
  return out;
}

std::vector<double> lattice_spectrum_via_symbol_2d(const DiffusivityProfile2D& profile, int points_x, int points_y,
                                                   double spacing_x, double spacing_y) {
  const int px = profile.period_x(), py = profile.period_y();
  if (points_x % px != 0 || points_y % py != 0) throw InvalidArgument("lattice size must be a multiple of the period");
  std::vector<double> out;
  for (int mx = 0; mx < points_x / px; ++mx) {
    for (int my = 0; my < points_y / py; ++my) {
      const double kx = 2.0 * std::numbers::pi * mx / points_x;
      const double ky = 2.0 * std::numbers::pi * my / points_y;
      for (double v : symbol_values(fourier_symbol_2d(profile, kx, ky, spacing_x, spacing_y))) out.push_back(v);
    }
  }
  return out;
}

namespace {

std::vector<int> centred_modes(int patches) {
  std::vector<int> m;
  for (int j = -(patches - 1) / 2; j <= patches / 2; ++j) m.push_back(j);
  return m;
}

void sort_by_magnitude(std::vector<double>& v) {
  std::sort(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
}

}  // namespace

std::vector<double> lattice_macro_spectrum_1d(const DiffusivityProfile1D& profile, int points, double spacing,
                                              int patches) {
  if (points % profile.period() != 0) throw InvalidArgument("lattice size must be a multiple of the period");
  if (patches < 1 || patches > points / profile.period()) throw InvalidArgument("too many patch modes for lattice");
  std::vector<double> out;
  for (int m : centred_modes(patches)) {
    const double k = 2.0 * std::numbers::pi * m / points;
    out.push_back(symbol_values(fourier_symbol(profile, k).matrix).back() / (spacing * spacing));
  }
  sort_by_magnitude(out);
  return out;
}

std::vector<double> lattice_macro_spectrum_2d(const DiffusivityProfile2D& profile, int points_x, int points_y,
                                              double spacing_x, double spacing_y, int patches_x, int patches_y) {
  if (points_x % profile.period_x() != 0 || points_y % profile.period_y() != 0) {
    throw InvalidArgument("lattice size must be a multiple of the period");
  }
  if (patches_x < 1 || patches_y < 1 || patches_x > points_x / profile.period_x() ||
      patches_y > points_y / profile.period_y()) {
    throw InvalidArgument("too many patch modes for lattice");
  }
  std::vector<double> out;
  for (int mx : centred_modes(patches_x)) {
    for (int my : centred_modes(patches_y)) {
      const double kx = 2.0 * std::numbers::pi * mx / points_x;
      const double ky = 2.0 * std::numbers::pi * my / points_y;
      out.push_back(symbol_values(fourier_symbol_2d(profile, kx, ky, spacing_x, spacing_y)).back());
    }
  }
  sort_by_magnitude(out);
  return out;
}

}  // namespace patchtooth

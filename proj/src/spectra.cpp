#include "patchtooth/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "patchtooth/assembly.hpp"

namespace patchtooth {

namespace {

bool magnitude_order(double a, double b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  return a > b;
}

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Ritz values of `matrix` on span(basis), computed in long double.
std::vector<double> ritz_values(const Matrix& matrix, const Matrix& basis) {
  LongMatrix v = basis.cast<long double>();
  // Two passes of modified Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      for (Eigen::Index q = 0; q < c; ++q) v.col(c) -= v.col(q).dot(v.col(c)) * v.col(q);
      v.col(c) /= v.col(c).norm();
    }
  }
  const LongMatrix lv = matrix.cast<long double>() * v;
  LongMatrix g = v.transpose() * lv;
  g = (0.5L * (g + g.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<LongMatrix> solver(g, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k)
    out.push_back(static_cast<double>(solver.eigenvalues()(k)));
  return out;
}

}  // namespace

std::vector<double> SpectrumReport::macro() const {
  return {eigenvalues.begin(), eigenvalues.begin() + std::min<std::size_t>(macro_count, eigenvalues.size())};
}

std::vector<double> SpectrumReport::micro() const {
  return {eigenvalues.begin() + std::min<std::size_t>(macro_count, eigenvalues.size()), eigenvalues.end()};
}

SymmetricDecomposition decompose_symmetric(const Matrix& matrix, double tolerance) {
  const auto report = symmetry_defect(matrix);
  if (report.relative > tolerance) {
    throw NumericalError("operator is not symmetric (relative defect " + std::to_string(report.relative) +
                         "); use the general eigensolver");
  }
  const Matrix sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectrumReport make_report(std::vector<double> values, int macro_count) {
  std::stable_sort(values.begin(), values.end(), magnitude_order);
  SpectrumReport report;
  report.macro_count = std::clamp<int>(macro_count, 0, static_cast<int>(values.size()));
  report.eigenvalues = std::move(values);
  if (!report.eigenvalues.empty()) report.zero_mode_magnitude = std::abs(report.eigenvalues.front());
  if (report.macro_count > 0 && report.macro_count < static_cast<int>(report.eigenvalues.size())) {
    const double slow = std::abs(report.eigenvalues[report.macro_count - 1]);
    const double fast = std::abs(report.eigenvalues[report.macro_count]);
    report.gap_ratio = slow > 0.0 ? fast / slow : std::numeric_limits<double>::infinity();
  }
  return report;
}

SpectrumReport eigen_symmetric(const AssembledOperator& op, const SymmetricEigenOptions& options) {
  const auto decomposition = decompose_symmetric(op.matrix, options.symmetry_tolerance);
  const Eigen::Index size = decomposition.values.size();
  int macro = options.macro_count >= 0 ? options.macro_count : op.macro_modes;
  macro = std::clamp<int>(macro, 0, static_cast<int>(size));

  std::vector<Eigen::Index> order(size);
  for (Eigen::Index k = 0; k < size; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return magnitude_order(decomposition.values(a), decomposition.values(b));
  });

  std::vector<double> values(size);
  for (Eigen::Index k = 0; k < size; ++k) values[k] = decomposition.values(order[k]);

  if (options.refine_macro && macro > 0 && macro < size) {
    Matrix basis(size, macro);
    for (int k = 0; k < macro; ++k) basis.col(k) = decomposition.vectors.col(order[k]);
    const Matrix sym = 0.5 * (op.matrix + op.matrix.transpose());
    auto refined = ritz_values(sym, basis);
    std::copy(refined.begin(), refined.end(), values.begin());
  }
  return make_report(std::move(values), macro);
}

double ComplexSpectrum::max_real() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues) m = std::max(m, z.real());
  return m;
}

double ComplexSpectrum::max_abs_real() const {
  double m = 0.0;
  for (const auto& z : eigenvalues) m = std::max(m, std::abs(z.real()));
  return m;
}

double ComplexSpectrum::max_abs_imag() const {
  double m = 0.0;
  for (const auto& z : eigenvalues) m = std::max(m, std::abs(z.imag()));
  return m;
}

Vector balance(Matrix& a) {
  const Eigen::Index n = a.rows();
  Vector scale = Vector::Ones(n);
  constexpr double radix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        scale(i) *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return scale;
}

namespace {

std::vector<std::complex<double>> general_values(Matrix m) {
  if (m.rows() == 0) return {};
  balance(m);
  Eigen::EigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("general eigensolver did not converge");
  std::vector<std::complex<double>> out(solver.eigenvalues().data(),
                                        solver.eigenvalues().data() + solver.eigenvalues().size());
  return out;
}

void sort_complex(std::vector<std::complex<double>>& values) {
  std::stable_sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

ComplexSpectrum eigen_general(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("eigenvalues need a square matrix");
  ComplexSpectrum out;
  out.eigenvalues = general_values(matrix);
  sort_complex(out.eigenvalues);
  return out;
}

ComplexSpectrum eigen_general(const AssembledOperator& op) {
  const Matrix& sub = op.invariant_subspace;
  if (sub.cols() == 0) return eigen_general(op.matrix);
  if (sub.rows() != op.size()) throw InvalidArgument("invariant subspace has the wrong dimension");

  const Eigen::Index n = op.size();
  const Eigen::Index k = sub.cols();
  Eigen::HouseholderQR<Matrix> qr(sub);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix t = q.transpose() * op.matrix * q;

  // The leading block acts on the invariant subspace. Rounding-level entries
  // in it stand for exact zeros: the block is typically nilpotent, and
  // perturbing a Jordan block by eps moves its eigenvalues by sqrt(eps).
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * op.matrix.cwiseAbs().maxCoeff();
  Matrix lead = t.topLeftCorner(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      if (std::abs(lead(a, b)) <= floor) lead(a, b) = 0.0;
  const double leak = t.bottomLeftCorner(n - k, k).cwiseAbs().maxCoeff();
  if (leak > 1e-10 * std::max(1.0, op.matrix.cwiseAbs().maxCoeff())) {
    throw NumericalError("recorded subspace is not invariant");
  }

  ComplexSpectrum out;
  out.eigenvalues = general_values(lead);
  auto rest = general_values(t.bottomRightCorner(n - k, n - k));
  out.eigenvalues.insert(out.eigenvalues.end(), rest.begin(), rest.end());
  sort_complex(out.eigenvalues);
  return out;
}

std::vector<double> collapse_unique(const std::vector<double>& values, double threshold, double zero_tolerance) {
  double largest = 0.0;
  for (double v : values) largest = std::max(largest, std::abs(v));
  std::vector<double> sorted;
  for (double v : values)
    if (std::abs(v) > zero_tolerance * largest) sorted.push_back(v);
  std::stable_sort(sorted.begin(), sorted.end(), magnitude_order);

  std::vector<double> out;
  std::size_t start = 0;
  while (start < sorted.size()) {
    std::size_t end = start + 1;
    const double first = std::abs(sorted[start]);
    while (end < sorted.size() && std::abs(sorted[end]) - first <= threshold * first) ++end;
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) sum += sorted[k];
    out.push_back(sum / static_cast<double>(end - start));
    start = end;
  }
  return out;
}

ErrorTable error_table(const SpectrumReport& test, const SpectrumReport& reference, int count) {
  if (count < 1) throw InvalidArgument("error table needs a positive mode count");
  const auto t = collapse_unique(test.macro());
  const auto r = collapse_unique(reference.macro());
  if (static_cast<int>(t.size()) < count || static_cast<int>(r.size()) < count) {
    throw InvalidArgument("insufficient macroscale modes for an error table of " + std::to_string(count) + " rows");
  }
  ErrorTable table;
  for (int k = 0; k < count; ++k) {
    table.push_back({k + 1, t[k], r[k], std::abs(t[k] - r[k]) / std::abs(r[k])});
  }
  return table;
}

double convergence_slope(const std::vector<double>& x, const std::vector<double>& errors) {
  if (x.size() != errors.size()) throw InvalidArgument("slope fit needs equally many abscissae and errors");
  if (x.size() < 3) throw InvalidArgument("slope fit needs at least three points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(errors[k] > 0.0) || !(x[k] > 0.0)) throw InvalidArgument("slope fit needs positive data");
    const double lx = std::log(x[k]), ly = std::log(errors[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(x.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("slope fit needs distinct abscissae");
  return (m * sxy - sx * sy) / denom;
}

double compare_spectra(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) throw InvalidArgument("spectra differ in size");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a[k] - b[k]));
    scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace patchtooth

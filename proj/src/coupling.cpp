#include "patchtooth/coupling.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

namespace patchtooth {

namespace {

void check_ratio(double ratio) {
  if (!(ratio > 0.0) || ratio > 1.0) throw InvalidArgument("size ratio r must lie in (0, 1]");
}

// Stencil over offsets -width..width, stored at index offset + width.
using Stencil = std::vector<double>;

// Coefficients of delta^{2k}: (-1)^{k-j} C(2k, k+j) at offset j.
Stencil even_difference(int k, int width) {
  Stencil s(2 * width + 1, 0.0);
  double binomial = 1.0;  // C(2k, 0)
  for (int q = 0; q <= 2 * k; ++q) {
    const int offset = q - k;
    s[offset + width] = ((k - offset) % 2 == 0 ? 1.0 : -1.0) * binomial;
    binomial = binomial * (2 * k - q) / (q + 1);
  }
  return s;
}

// Coefficients of mu delta^{2k-1} = (delta^{2k-2} (E - E^{-1})) / 2.
Stencil odd_mean_difference(int k, int width) {
  const Stencil base = even_difference(k - 1, width);
  Stencil s(2 * width + 1, 0.0);
  for (int q = 0; q < static_cast<int>(base.size()); ++q) {
    if (base[q] == 0.0) continue;
    if (q + 1 < static_cast<int>(s.size())) s[q + 1] += 0.5 * base[q];
    if (q - 1 >= 0) s[q - 1] -= 0.5 * base[q];
  }
  return s;
}

// Stencil of E^{shift} truncated after delta^{2P}:
//   1 + sum_k prod_{l<k}(r^2 - l^2) [ (2k/r) mu delta^{2k-1} + delta^{2k} ] / (2k)!
// with the sign of the odd term following the sign of the shift.
Stencil fractional_shift(double shift, int order) {
  const double r = std::abs(shift);
  const double sign = shift >= 0.0 ? 1.0 : -1.0;
  Stencil s(2 * order + 1, 0.0);
  s[order] = 1.0;
  double product = 1.0;    // prod_{l=1}^{k-1} (r^2 - l^2)
  double factorial = 1.0;  // (2k)!
  for (int k = 1; k <= order; ++k) {
    if (k > 1) product *= r * r - static_cast<double>((k - 1) * (k - 1));
    factorial *= static_cast<double>((2 * k - 1) * (2 * k));
    // prod_{l=0}^{k-1}(r^2 - l^2) = r^2 * product, and (2k/r) r^2 = 2k r.
    const double even_coeff = r * r * product / factorial;
    const double odd_coeff = sign * 2.0 * k * r * product / factorial;
    const Stencil even = even_difference(k, order);
    const Stencil odd = odd_mean_difference(k, order);
    for (std::size_t q = 0; q < s.size(); ++q) s[q] += even_coeff * even[q] + odd_coeff * odd[q];
  }
  return s;
}

#ifndef NDEBUG
// Classical Lagrange basis at x over nodes -order..order.
double lagrange_basis(int node, int order, double x) {
  double value = 1.0;
  for (int m = -order; m <= order; ++m) {
    if (m != node) value *= (x - m) / (node - m);
  }
  return value;
}
#endif

}  // namespace

InterpolationWeights spectral_weights(int patches, double ratio) {
  if (patches < 1) throw InvalidArgument("patch count must be at least 1");
  check_ratio(ratio);
  const int n = patches;
  const bool even = n % 2 == 0;
  const int lo = even ? -n / 2 + 1 : -(n - 1) / 2;
  const int hi = even ? n / 2 - 1 : (n - 1) / 2;

  InterpolationWeights w{n, std::vector<double>(n), std::vector<double>(n)};
  for (int offset = 0; offset < n; ++offset) {
    std::complex<double> right = 0.0;
    std::complex<double> left = 0.0;
    for (int m = lo; m <= hi; ++m) {
      const double phase = 2.0 * std::numbers::pi * m / n;  // k H
      right += std::polar(1.0, phase * (-offset + ratio));
      left += std::polar(1.0, phase * (-offset - ratio));
    }
    if (even) {
      const double nyquist = (offset % 2 == 0 ? 1.0 : -1.0) * std::cos(std::numbers::pi * ratio);
      right += nyquist;
      left += nyquist;
    }
    right /= static_cast<double>(n);
    left /= static_cast<double>(n);
    if (std::abs(right.imag()) > 1e-13 || std::abs(left.imag()) > 1e-13) {
      throw NumericalError("spectral weights acquired an imaginary part");
    }
    w.right[offset] = right.real();
    w.left[offset] = left.real();
  }
  return w;
}

InterpolationWeights lagrangian_weights(int patches, double ratio, int order) {
  if (order < 1) throw InvalidArgument("Lagrangian order P must be at least 1");
  if (2 * order + 1 > patches) {
    throw InvalidArgument("Lagrangian stencil 2P+1 = " + std::to_string(2 * order + 1) + " exceeds patch count " +
                          std::to_string(patches));
  }
  check_ratio(ratio);
  const Stencil right = fractional_shift(ratio, order);
  const Stencil left = fractional_shift(-ratio, order);

#ifndef NDEBUG
  for (int m = -order; m <= order; ++m) {
    if (std::abs(right[m + order] - lagrange_basis(m, order, ratio)) > 1e-9 ||
        std::abs(left[m + order] - lagrange_basis(m, order, -ratio)) > 1e-9) {
      throw std::logic_error("central-difference expansion disagrees with Lagrange interpolation");
    }
  }
#endif

  InterpolationWeights w{patches, std::vector<double>(patches, 0.0), std::vector<double>(patches, 0.0)};
  for (int m = -order; m <= order; ++m) {
    const auto slot = static_cast<std::size_t>(wrap(m, patches));
    w.right[slot] = right[m + order];
    w.left[slot] = left[m + order];
  }
  return w;
}

InterpolationWeights make_weights(const CouplingSpec& coupling, int patches, double ratio) {
  switch (coupling.scheme) {
    case CouplingScheme::Spectral:
      return spectral_weights(patches, ratio);
    case CouplingScheme::Lagrangian:
      return lagrangian_weights(patches, ratio, coupling.order);
  }
  throw InvalidArgument("unknown coupling scheme");
}

EdgeValues apply_edges_1d(const InterpolationWeights& weights, const Vector& first, const Vector& last) {
  const int n = weights.patches;
  if (first.size() != n || last.size() != n) {
    throw InvalidArgument("next-to-edge vectors must have one entry per patch");
  }
  EdgeValues out{Vector::Zero(n), Vector::Zero(n)};
  for (int I = 0; I < n; ++I) {
    for (int J = 0; J < n; ++J) {
      out.right[I] += weights.right_at(J - I) * first[J];
      out.left[I] += weights.left_at(J - I) * last[J];
    }
  }
  return out;
}

void write_weights_csv(std::ostream& out, const InterpolationWeights& weights) {
  out << "offset,w_right,w_left\n" << std::setprecision(17);
  for (int m = 0; m < weights.patches; ++m) {
    out << m << ',' << weights.right[m] << ',' << weights.left[m] << '\n';
  }
}

}  // namespace patchtooth

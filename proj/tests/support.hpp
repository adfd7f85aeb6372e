#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "patchtooth/microscale.hpp"

namespace testing {

inline patchtooth::DiffusivityProfile1D five_phase() {
  return patchtooth::DiffusivityProfile1D({3.965, 2.531, 0.838, 0.331, 7.275});
}

// Period 5 x 4 diffusivities used for the 2D figures.
inline patchtooth::DiffusivityProfile2D chequer() {
  return patchtooth::DiffusivityProfile2D({{18.91, 1.06, 0.63, 2.11},
                                           {4.46, 0.72, 1.02, 1.66},
                                           {4.89, 0.88, 1.31, 5.79},
                                           {1.62, 2.68, 2.32, 1.24},
                                           {0.42, 0.88, 0.59, 1.35}},
                                          {{0.48, 0.63, 1.31, 0.51},
                                           {0.39, 10.38, 3.07, 0.37},
                                           {2.10, 1.74, 2.68, 1.63},
                                           {1.20, 4.38, 0.50, 1.02},
                                           {2.55, 1.23, 0.33, 1.06}});
}

// Lagrange basis polynomial for node `node` over integer nodes -P..P, at x.
inline double lagrange_basis(int order, int node, double x) {
  double v = 1.0;
  for (int m = -order; m <= order; ++m)
    if (m != node) v *= (x - m) / static_cast<double>(node - m);
  return v;
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<double> eigenvalues_of(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return {s.eigenvalues().data(), s.eigenvalues().data() + s.eigenvalues().size()};
}

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a[k] - b[k]));
    scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace testing

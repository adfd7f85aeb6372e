#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "patchtooth/common.hpp"

namespace patchtooth {

/// Periodic 1D diffusivity: values()[l] is the diffusivity on the link
/// between lattice points l and l+1, indexed modulo the period.
class DiffusivityProfile1D {
 public:
  explicit DiffusivityProfile1D(std::vector<double> values);

  int period() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }

  /// Diffusivity of the link m+1/2 (any integer m).
  double at(long half_index) const { return values_[static_cast<std::size_t>(wrap(half_index, period()))]; }

  /// Profile shifted by `shift` links: result.at(m) == at(m + shift).
  DiffusivityProfile1D shifted(long shift) const;

  bool operator==(const DiffusivityProfile1D&) const = default;

 private:
  std::vector<double> values_;
};

double kappa_at(const DiffusivityProfile1D& profile, long half_index);

/// Periodic 2D diffusivity on a px-by-py cell.
///   kx(i, j) is the diffusivity on the x-link between (i, j) and (i+1, j);
///   ky(i, j) is the diffusivity on the y-link between (i, j) and (i, j+1).
/// Both are indexed modulo (px, py).
class DiffusivityProfile2D {
 public:
  /// Grids are given as rows over i, each row holding py entries over j.
  DiffusivityProfile2D(std::vector<std::vector<double>> kx, std::vector<std::vector<double>> ky);

  int period_x() const { return px_; }
  int period_y() const { return py_; }

  double kx(long i, long j) const { return kx_[cell(i, j)]; }
  double ky(long i, long j) const { return ky_[cell(i, j)]; }

  std::vector<std::vector<double>> kx_grid() const;
  std::vector<std::vector<double>> ky_grid() const;

 private:
  std::size_t cell(long i, long j) const {
    return static_cast<std::size_t>(wrap(i, px_) * py_ + wrap(j, py_));
  }

  int px_ = 0;
  int py_ = 0;
  std::vector<double> kx_;
  std::vector<double> ky_;
};

/// Full periodic lattice operator for d^2 du/dt = heterogeneous second
/// difference, divided through by d^2. Requires points % period == 0.
AssembledOperator full_lattice_operator_1d(const DiffusivityProfile1D& profile, int points, double spacing);

/// Five-point heterogeneous operator on an Mx-by-My doubly periodic lattice;
/// unknown (i, j) sits at index j * Mx + i.
AssembledOperator full_lattice_operator_2d(const DiffusivityProfile2D& profile, int points_x, int points_y,
                                           double spacing_x, double spacing_y);

/// Standard normal deviates from the "mt19937_64/box-muller/v1" generator:
/// std::mt19937_64 seeded with `seed`, 53-bit uniforms, Box-Muller pairs
/// (cosine branch first). Bit-reproducible across conforming platforms.
std::vector<double> standard_normals(std::size_t count, std::uint64_t seed);

/// values[l] = exp(sigma * z_l) with z from standard_normals(p, seed).
DiffusivityProfile1D random_lognormal_profile(int period, double sigma, std::uint64_t seed);

/// kx entries first (row-major over i then j), then ky, from one stream.
DiffusivityProfile2D random_lognormal_profile_2d(int period_x, int period_y, double sigma, std::uint64_t seed);

void to_json(nlohmann::json& j, const DiffusivityProfile1D& profile);
void to_json(nlohmann::json& j, const DiffusivityProfile2D& profile);
DiffusivityProfile1D profile_1d_from_json(const nlohmann::json& j);
DiffusivityProfile2D profile_2d_from_json(const nlohmann::json& j);

}  // namespace patchtooth

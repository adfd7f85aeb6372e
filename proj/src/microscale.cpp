#include "patchtooth/microscale.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

namespace patchtooth {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite and strictly positive");
  }
}

}  // namespace

DiffusivityProfile1D::DiffusivityProfile1D(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("diffusivity profile needs at least one value");
  for (double v : values_) require_positive(v, "diffusivity");
}

DiffusivityProfile1D DiffusivityProfile1D::shifted(long shift) const {
  std::vector<double> out(values_.size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = at(static_cast<long>(l) + shift);
  return DiffusivityProfile1D(std::move(out));
}

double kappa_at(const DiffusivityProfile1D& profile, long half_index) { return profile.at(half_index); }

DiffusivityProfile2D::DiffusivityProfile2D(std::vector<std::vector<double>> kx,
                                           std::vector<std::vector<double>> ky) {
  if (kx.empty() || kx.front().empty()) throw InvalidArgument("kx grid must be non-empty");
  px_ = static_cast<int>(kx.size());
  py_ = static_cast<int>(kx.front().size());
  if (ky.size() != kx.size()) throw InvalidArgument("kx and ky grids must share the same periods");
  kx_.reserve(static_cast<std::size_t>(px_ * py_));
  ky_.reserve(static_cast<std::size_t>(px_ * py_));
  for (int i = 0; i < px_; ++i) {
    if (static_cast<int>(kx[i].size()) != py_ || static_cast<int>(ky[i].size()) != py_) {
      throw InvalidArgument("kx and ky grids must be rectangular with equal shape");
    }
    for (int j = 0; j < py_; ++j) {
      require_positive(kx[i][j], "kx diffusivity");
      require_positive(ky[i][j], "ky diffusivity");
      kx_.push_back(kx[i][j]);
      ky_.push_back(ky[i][j]);
    }
  }
}

std::vector<std::vector<double>> DiffusivityProfile2D::kx_grid() const {
  std::vector<std::vector<double>> g(px_, std::vector<double>(py_));
  for (int i = 0; i < px_; ++i)
    for (int j = 0; j < py_; ++j) g[i][j] = kx(i, j);
  return g;
}

std::vector<std::vector<double>> DiffusivityProfile2D::ky_grid() const {
  std::vector<std::vector<double>> g(px_, std::vector<double>(py_));
  for (int i = 0; i < px_; ++i)
    for (int j = 0; j < py_; ++j) g[i][j] = ky(i, j);
  return g;
}

AssembledOperator full_lattice_operator_1d(const DiffusivityProfile1D& profile, int points, double spacing) {
  if (points < 3) throw InvalidArgument("full lattice needs at least 3 points");
  if (points % profile.period() != 0) {
    throw InvalidArgument("lattice point count must be a multiple of the diffusivity period");
  }
  require_positive(spacing, "lattice spacing");
  const double scale = 1.0 / (spacing * spacing);

  AssembledOperator op;
  op.layout.points_x = points;
  op.macro_modes = points;
  op.matrix = Matrix::Zero(points, points);
  for (int i = 0; i < points; ++i) {
    const double right = profile.at(i) * scale;
    const double left = profile.at(i - 1) * scale;
    op.matrix(i, i) -= left + right;
    op.matrix(i, wrap(i + 1, points)) += right;
    op.matrix(i, wrap(i - 1, points)) += left;
  }
  return op;
}

AssembledOperator full_lattice_operator_2d(const DiffusivityProfile2D& profile, int points_x, int points_y,
                                           double spacing_x, double spacing_y) {
  if (points_x < 1 || points_y < 1) throw InvalidArgument("lattice extent must be positive");
  if (points_x % profile.period_x() != 0 || points_y % profile.period_y() != 0) {
    throw InvalidArgument("lattice extents must be multiples of the diffusivity periods");
  }
  require_positive(spacing_x, "lattice spacing x");
  require_positive(spacing_y, "lattice spacing y");
  const double sx = 1.0 / (spacing_x * spacing_x);
  const double sy = 1.0 / (spacing_y * spacing_y);

  AssembledOperator op;
  op.layout.dimension = 2;
  op.layout.points_x = points_x;
  op.layout.points_y = points_y;
  op.macro_modes = points_x * points_y;
  const int size = points_x * points_y;
  op.matrix = Matrix::Zero(size, size);
  auto at = [&](long i, long j) { return wrap(j, points_y) * points_x + wrap(i, points_x); };
  for (int j = 0; j < points_y; ++j) {
    for (int i = 0; i < points_x; ++i) {
      const long a = at(i, j);
      const double east = profile.kx(i, j) * sx;
      const double west = profile.kx(i - 1, j) * sx;
      const double north = profile.ky(i, j) * sy;
      const double south = profile.ky(i, j - 1) * sy;
      op.matrix(a, a) -= east + west + north + south;
      op.matrix(a, at(i + 1, j)) += east;
      op.matrix(a, at(i - 1, j)) += west;
      op.matrix(a, at(i, j + 1)) += north;
      op.matrix(a, at(i, j - 1)) += south;
    }
  }
  return op;
}

std::vector<double> standard_normals(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto uniform = [&engine] {
    // 53 random bits in (0, 1]; never zero so log() is finite.
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  };
  std::vector<double> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out.push_back(radius * std::cos(angle));
    out.push_back(radius * std::sin(angle));
  }
  out.resize(count);
  return out;
}

DiffusivityProfile1D random_lognormal_profile(int period, double sigma, std::uint64_t seed) {
  if (period < 1) throw InvalidArgument("period must be at least 1");
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be non-negative");
  auto z = standard_normals(static_cast<std::size_t>(period), seed);
  for (double& v : z) v = std::exp(sigma * v);
  return DiffusivityProfile1D(std::move(z));
}

DiffusivityProfile2D random_lognormal_profile_2d(int period_x, int period_y, double sigma, std::uint64_t seed) {
  if (period_x < 1 || period_y < 1) throw InvalidArgument("periods must be at least 1");
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be non-negative");
  const auto cells = static_cast<std::size_t>(period_x * period_y);
  const auto z = standard_normals(2 * cells, seed);
  std::vector<std::vector<double>> kx(period_x, std::vector<double>(period_y));
  auto ky = kx;
  for (int i = 0; i < period_x; ++i) {
    for (int j = 0; j < period_y; ++j) {
      const auto c = static_cast<std::size_t>(i * period_y + j);
      kx[i][j] = std::exp(sigma * z[c]);
      ky[i][j] = std::exp(sigma * z[cells + c]);
    }
  }
  return DiffusivityProfile2D(std::move(kx), std::move(ky));
}

void to_json(nlohmann::json& j, const DiffusivityProfile1D& profile) {
  j = nlohmann::json{{"period", profile.period()},
                     {"values", std::vector<double>(profile.values().begin(), profile.values().end())}};
}

void to_json(nlohmann::json& j, const DiffusivityProfile2D& profile) {
  j = nlohmann::json{{"periods", {profile.period_x(), profile.period_y()}},
                     {"kx", profile.kx_grid()},
                     {"ky", profile.ky_grid()}};
}

DiffusivityProfile1D profile_1d_from_json(const nlohmann::json& j) {
  auto values = j.at("values").get<std::vector<double>>();
  if (j.contains("period") && j.at("period").get<int>() != static_cast<int>(values.size())) {
    throw InvalidArgument("profile period does not match number of values");
  }
  return DiffusivityProfile1D(std::move(values));
}

DiffusivityProfile2D profile_2d_from_json(const nlohmann::json& j) {
  DiffusivityProfile2D profile(j.at("kx").get<std::vector<std::vector<double>>>(),
                               j.at("ky").get<std::vector<std::vector<double>>>());
  if (j.contains("periods")) {
    const auto periods = j.at("periods").get<std::vector<int>>();
    if (periods.size() != 2 || periods[0] != profile.period_x() || periods[1] != profile.period_y()) {
      throw InvalidArgument("profile periods do not match kx/ky grid shape");
    }
  }
  return profile;
}

}  // namespace patchtooth

#include "patchtooth/geometry.hpp"

#include <cmath>

namespace patchtooth {

PatchGrid1D build_grid_1d(double length, int patches, int points, double ratio) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("domain length L must be positive");
  if (patches < 1) throw InvalidArgument("patch count N must be at least 1");
  if (points < 1) throw InvalidArgument("patch size n must be at least 1");
  if (!(ratio > 0.0) || ratio > 1.0) throw InvalidArgument("size ratio r must lie in (0, 1]");
  return PatchGrid1D{length, patches, points, ratio};
}

PatchGrid2D build_grid_2d(const PatchGrid1D& x, const PatchGrid1D& y) {
  return PatchGrid2D{build_grid_1d(x.length, x.patches, x.points, x.ratio),
                     build_grid_1d(y.length, y.patches, y.points, y.ratio)};
}

double ratio_for_spacing(double length, int patches, int points, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("spacing must be positive");
  const double ratio = spacing * points * patches / length;
  if (!(ratio > 0.0) || ratio > 1.0 + 1e-12) throw InvalidArgument("requested spacing gives r outside (0, 1]");
  return std::min(ratio, 1.0);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

bool lattice_aligned(const PatchGrid1D& grid, int period) {
  const double steps = grid.steps_between_patches();
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) return false;
  return static_cast<long>(rounded) % period == 0;
}

namespace {

void check_axis(std::vector<Diagnostic>& out, const PatchGrid1D& grid, int period, bool ensemble,
                const std::string& axis) {
  if (!ensemble && grid.points % period != 0) {
    out.push_back({Diagnostic::Severity::Error, "grid" + axis + ".n",
                   "patch size n = " + std::to_string(grid.points) + " is not a multiple of the diffusivity period " +
                       std::to_string(period) + "; the coupled operator would not be symmetric (use an ensemble)"});
  }
}

}  // namespace

std::vector<Diagnostic> validate_compatibility(const PatchGrid1D& grid, const DiffusivityProfile1D& profile,
                                               bool ensemble) {
  std::vector<Diagnostic> out;
  check_axis(out, grid, profile.period(), ensemble, "");
  return out;
}

std::vector<Diagnostic> validate_compatibility(const PatchGrid2D& grid, const DiffusivityProfile2D& profile,
                                               bool ensemble) {
  std::vector<Diagnostic> out;
  check_axis(out, grid.x, profile.period_x(), ensemble, ".x");
  check_axis(out, grid.y, profile.period_y(), ensemble, ".y");
  return out;
}

void to_json(nlohmann::json& j, const PatchGrid1D& grid) {
  j = nlohmann::json{{"L", grid.length},
                     {"N", grid.patches},
                     {"n", grid.points},
                     {"r", grid.ratio},
                     {"H", grid.macro_spacing()},
                     {"h", grid.width()},
                     {"d", grid.spacing()}};
}

PatchGrid1D grid_1d_from_json(const nlohmann::json& j) {
  return build_grid_1d(j.at("L").get<double>(), j.at("N").get<int>(), j.at("n").get<int>(), j.at("r").get<double>());
}

}  // namespace patchtooth

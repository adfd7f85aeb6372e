#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "patchtooth/microscale.hpp"

namespace patchtooth {

/// Uniform periodic array of N patches on [H/2, L + H/2), each holding n
/// interior lattice points. Patch I (zero based) is centred at (I + 1) H and
/// its point i (0..n+1, with 0 and n+1 the edges) sits at
/// X_I + (i - (n+1)/2) d. Spacing d = r H / n is derived, never stored.
struct PatchGrid1D {
  double length = 0.0;  // L
  int patches = 0;      // N
  int points = 0;       // n, interior points per patch
  double ratio = 0.0;   // r = h / H

  double macro_spacing() const { return length / patches; }
  double width() const { return ratio * macro_spacing(); }
  double spacing() const { return width() / points; }
  double center(int patch) const { return (patch + 1) * macro_spacing(); }
  double position(int patch, int point) const {
    return center(patch) + (point - 0.5 * (points + 1)) * spacing();
  }
  /// H / d, the number of lattice steps between patch centres (may be fractional).
  double steps_between_patches() const { return points / ratio; }
};

struct PatchGrid2D {
  PatchGrid1D x;
  PatchGrid1D y;
};

PatchGrid1D build_grid_1d(double length, int patches, int points, double ratio);
PatchGrid2D build_grid_2d(const PatchGrid1D& x, const PatchGrid1D& y);

/// Size ratio giving lattice spacing `spacing` for the other parameters.
double ratio_for_spacing(double length, int patches, int points, double spacing);

struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity = Severity::Error;
  std::string field;
  std::string message;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

std::vector<Diagnostic> validate_compatibility(const PatchGrid1D& grid, const DiffusivityProfile1D& profile,
                                               bool ensemble);
std::vector<Diagnostic> validate_compatibility(const PatchGrid2D& grid, const DiffusivityProfile2D& profile,
                                               bool ensemble);

/// True when H/d is an integer multiple of `period`, so the patches sit on
/// a full lattice sharing the heterogeneity phase.
bool lattice_aligned(const PatchGrid1D& grid, int period);

void to_json(nlohmann::json& j, const PatchGrid1D& grid);
PatchGrid1D grid_1d_from_json(const nlohmann::json& j);

}  // namespace patchtooth

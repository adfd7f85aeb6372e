#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchtooth/coupling.hpp"
#include "patchtooth/geometry.hpp"

namespace patchtooth {

enum class Model { Diffusion1D, Diffusion2D, Wave1D };
enum class Task { Eigen, Simulate, Homogenize, Sweep, Check };

std::string to_string(Model model);
std::string to_string(Task task);
std::optional<Task> parse_task(const std::string& name);

struct InitialCondition {
  std::string type = "sinusoid";  // sinusoid | gaussian | sinusoid_noise
  std::vector<int> mode{1, 1};     // wave numbers over the domain, per axis
  double amplitude = 1.0;
  std::vector<double> center;      // gaussian centre, defaults to mid-domain
  double width = 0.0;              // gaussian standard deviation, defaults to L/10
  double noise = 0.1;
  std::uint64_t seed = 0;
};

struct SimulateConfig {
  std::string method = "exact";  // exact | rk4
  std::vector<double> times;     // exact snapshots
  double dt = 0.0;               // rk4
  int steps = 0;
  int record_every = 1;
  bool override_stability = false;
  InitialCondition initial;
};

struct SweepConfig {
  std::string axis = "order";  // order | patches
  std::vector<int> values;
  std::string reference = "spectral";  // spectral | lattice
  int modes = 5;
};

struct HomogenizeConfig {
  std::vector<double> nodes;    // fit nodes; empty = automatic
  std::vector<double> samples;  // k values for the slow-branch CSV
  std::optional<double> d;      // overrides the grid spacing
};

struct RunConfig {
  Model model = Model::Diffusion1D;
  Task task = Task::Eigen;
  PatchGrid1D grid_x;
  PatchGrid1D grid_y;
  std::optional<DiffusivityProfile1D> profile_1d;
  std::optional<DiffusivityProfile2D> profile_2d;
  CouplingSpec coupling;
  CouplingSpec coupling_y;
  bool ensemble = false;
  bool allow_asymmetric = false;
  double epsilon = 0.02;
  int macro_count = -1;
  SimulateConfig simulate;
  SweepConfig sweep;
  HomogenizeConfig homogenize;
  std::string output_dir = "out";
  std::string matrix_format = "none";  // none | csv | binary, operator dump for eigen and check
  bool has_grid = false;

  PatchGrid2D grid_2d() const { return {grid_x, grid_y}; }
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<Diagnostic> diagnostics;
};

/// Validates against the documented schema (docs/run.schema.json) and the
/// cross-field rules; `config` is empty when any error diagnostic is present.
ParseResult parse_config(const nlohmann::json& document);

}  // namespace patchtooth

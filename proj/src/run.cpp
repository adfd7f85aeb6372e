#include "patchtooth/run.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>

#include "patchtooth/homogenize.hpp"
#include "patchtooth/spectra.hpp"
#include "patchtooth/timestep.hpp"

namespace patchtooth {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

AssembledOperator build_operator(const RunConfig& config, const CouplingSpec& coupling_x,
                                 const CouplingSpec& coupling_y) {
  AssemblyOptions options{config.ensemble, config.allow_asymmetric};
  switch (config.model) {
    case Model::Diffusion1D:
      return assemble_patch_1d(config.grid_x, *config.profile_1d, coupling_x, options);
    case Model::Diffusion2D:
      return assemble_patch_2d(config.grid_2d(), *config.profile_2d, coupling_x, coupling_y, options);
    case Model::Wave1D:
      return assemble_wave_1d(config.grid_x, *config.profile_1d, coupling_x, config.epsilon, options);
  }
  throw InvalidArgument("unknown model");
}

AssembledOperator build_operator(const RunConfig& config) {
  return build_operator(config, config.coupling, config.coupling_y);
}

namespace {

double periodic_offset(double x, double centre, double length) {
  const double dx = x - centre;
  return dx - length * std::round(dx / length);
}

double profile_value(const InitialCondition& ic, int mode, double x, double centre, double width, double length) {
  if (ic.type == "gaussian") {
    const double dx = periodic_offset(x, centre, length);
    return std::exp(-0.5 * dx * dx / (width * width));
  }
  return std::sin(2.0 * std::numbers::pi * mode * x / length);
}

}  // namespace

Vector initial_state(const RunConfig& config, const AssembledOperator& op) {
  const auto& ic = config.simulate.initial;
  const OperatorLayout& lay = op.layout;
  Vector u(static_cast<Eigen::Index>(lay.field_size()));
  const bool two_d = config.model == Model::Diffusion2D;
  const double cx = ic.center.size() > 0 ? ic.center[0] : 0.5 * config.grid_x.length + 0.5 * config.grid_x.macro_spacing();
  const double wx = ic.width > 0.0 ? ic.width : config.grid_x.length / 10.0;
  double cy = 0.0, wy = 1.0;
  if (two_d) {
    cy = ic.center.size() > 1 ? ic.center[1] : 0.5 * config.grid_y.length + 0.5 * config.grid_y.macro_spacing();
    wy = ic.width > 0.0 ? ic.width : config.grid_y.length / 10.0;
  }
  for (int J = 0; J < lay.patches_y; ++J)
    for (int I = 0; I < lay.patches_x; ++I)
      for (int j = 0; j < lay.points_y; ++j)
        for (int i = 0; i < lay.points_x; ++i)
          for (int m = 0; m < lay.members; ++m) {
            const double x = config.grid_x.position(I, i + 1);
            double value = profile_value(ic, ic.mode[0], x, cx, wx, config.grid_x.length);
            if (two_d) {
              const double y = config.grid_y.position(J, j + 1);
              value *= profile_value(ic, ic.mode[1], y, cy, wy, config.grid_y.length);
            }
            u(static_cast<Eigen::Index>(lay.index(I, J, i, j, m))) = ic.amplitude * value;
          }
  if (ic.type == "sinusoid_noise") {
    const auto z = standard_normals(static_cast<std::size_t>(u.size()), ic.seed);
    for (Eigen::Index k = 0; k < u.size(); ++k) u(k) += ic.noise * z[static_cast<std::size_t>(k)];
  }
  if (config.model == Model::Wave1D) {
    Vector state = Vector::Zero(op.size());
    state.head(u.size()) = u;
    return state;
  }
  return u;
}

int sweep_workers() {
  if (const char* env = std::getenv("PATCHTOOTH_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 256));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::ofstream open_output(const fs::path& path, std::ostream& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  log << "wrote " << path.string() << '\n';
  return out;
}

void write_json(const fs::path& path, const json& j, std::ostream& log) {
  auto out = open_output(path, log);
  out << j.dump(2) << '\n';
}

void dump_operator(const RunConfig& cfg, const AssembledOperator& op, const fs::path& dir, std::ostream& log) {
  if (cfg.matrix_format == "csv") {
    auto out = open_output(dir / "operator.csv", log);
    write_matrix_csv(out, op.matrix);
  } else if (cfg.matrix_format == "binary") {
    auto out = open_output(dir / "operator.bin", log);
    write_matrix_binary(out, op.matrix);
  }
}

json symmetry_json(const SymmetryReport& s) {
  return {{"defect", s.defect}, {"scale", s.scale}, {"relative", s.relative}};
}

json complex_summary(const ComplexSpectrum& spectrum) {
  return {{"max_real_part", spectrum.max_real()}, {"max_abs_imag", spectrum.max_abs_imag()}};
}

void task_eigen(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const auto op = build_operator(cfg);
  dump_operator(cfg, op, dir, log);
  json summary = {{"model", to_string(cfg.model)}, {"size", op.size()}};
  if (cfg.model == Model::Wave1D) {
    const auto spectrum = eigen_general(op);
    auto out = open_output(dir / "eigenvalues.csv", log);
    out << "index,real,imag\n";
    for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
      out << k << ',' << format_number(spectrum.eigenvalues[k].real()) << ','
          << format_number(spectrum.eigenvalues[k].imag()) << '\n';
    }
    summary.update(complex_summary(spectrum));
    summary["symmetry_of_diffusion_block"] = symmetry_json(symmetry_defect(
        Matrix(op.matrix.bottomLeftCorner(op.size() / 2, op.size() / 2))));
  } else {
    const auto report = eigen_symmetric(op, {.macro_count = cfg.macro_count});
    auto out = open_output(dir / "eigenvalues.csv", log);
    out << "index,eigenvalue,kind\n";
    for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
      out << k << ',' << format_number(report.eigenvalues[k]) << ','
          << (static_cast<int>(k) < report.macro_count ? "macro" : "micro") << '\n';
    }
    summary["macro_count"] = report.macro_count;
    summary["gap_ratio"] = report.gap_ratio;
    summary["zero_mode_magnitude"] = report.zero_mode_magnitude;
    summary["symmetry"] = symmetry_json(symmetry_defect(op));
    summary["unique_macro"] = collapse_unique(report.macro());
  }
  write_json(dir / "summary.json", summary, log);
}

void task_simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const auto op = build_operator(cfg);
  const StateVector u0{initial_state(cfg, op), 0.0};
  const auto& sim = cfg.simulate;
  Trajectory traj;
  if (sim.method == "exact") {
    traj = evolve_exact(op, u0, sim.times);
  } else {
    traj = evolve_rk4(op, u0, sim.dt, sim.steps, {sim.override_stability, sim.record_every});
  }

  const OperatorLayout& lay = op.layout;
  const bool two_d = cfg.model == Model::Diffusion2D;
  const bool wave = cfg.model == Model::Wave1D;
  const bool members = lay.members > 1;
  auto out = open_output(dir / "trajectory.csv", log);
  out << "t";
  if (wave) out << ",field";
  out << (two_d ? ",I,J,i,j" : ",I,i");
  if (members) out << ",member";
  out << (two_d ? ",x,y" : ",x") << ",value\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const std::string t = format_number(traj.times[s]);
    for (int f = 0; f < lay.fields; ++f)
      for (int J = 0; J < lay.patches_y; ++J)
        for (int I = 0; I < lay.patches_x; ++I)
          for (int j = 0; j < lay.points_y; ++j)
            for (int i = 0; i < lay.points_x; ++i)
              for (int m = 0; m < lay.members; ++m) {
                out << t;
                if (wave) out << ',' << (f == 0 ? 'u' : 'v');
                if (two_d) out << ',' << I << ',' << J << ',' << i + 1 << ',' << j + 1;
                else out << ',' << I << ',' << i + 1;
                if (members) out << ',' << m;
                out << ',' << format_number(cfg.grid_x.position(I, i + 1));
                if (two_d) out << ',' << format_number(cfg.grid_y.position(J, j + 1));
                out << ',' << format_number(traj.states[s](static_cast<Eigen::Index>(lay.index(I, J, i, j, m, f))))
                    << '\n';
              }
  }

  json summary = {{"model", to_string(cfg.model)}, {"method", sim.method}, {"snapshots", traj.size()}};
  if (wave) {
    const Eigen::Index m = op.size() / 2;
    const Matrix a = op.matrix.bottomLeftCorner(m, m);
    std::vector<double> energy;
    for (const auto& state : traj.states) energy.push_back(wave_energy(a, state));
    summary["energy"] = energy;
  } else {
    const auto mass = conserved_mass(traj);
    summary["mass"] = mass.sums;
    summary["mass_drift"] = mass.drift;
    summary["mass_relative_drift"] = mass.relative_drift;
  }
  write_json(dir / "summary.json", summary, log);
}

void task_homogenize(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const auto& profile = *cfg.profile_1d;
  const double d = cfg.homogenize.d ? *cfg.homogenize.d : cfg.grid_x.spacing();
  FitOptions fit;
  fit.nodes = cfg.homogenize.nodes;
  const auto coeffs = extract_coefficients(profile, d, fit);
  write_json(dir / "homogenized.json",
             {{"K2", coeffs.K2}, {"K4", coeffs.K4}, {"beta", coeffs.beta}, {"fit_residual", coeffs.fit_residual},
              {"d", coeffs.d}},
             log);
  const auto ks = cfg.homogenize.samples.empty() ? default_fit_nodes(profile) : cfg.homogenize.samples;
  auto out = open_output(dir / "slow_branch.csv", log);
  out << "k,slow_eigenvalue\n";
  for (const auto& [k, value] : sample_slow_branch(profile, ks)) out << format_number(k) << ',' << format_number(value) << '\n';
}

struct SweepRow {
  int value = 0;
  ErrorRow error;
};

SpectrumReport lattice_reference(const RunConfig& cfg, const PatchGrid1D& grid, int macro) {
  const double steps = cfg.grid_x.length / grid.spacing();
  const long points = std::lround(steps);
  const int p = cfg.profile_1d->period();
  if (std::abs(steps - points) > 1e-9 * steps || points % p != 0) {
    throw InvalidArgument("sweep.reference: L/d must be an integer multiple of the period for a lattice reference");
  }
  return make_report(lattice_spectrum_via_symbol_1d(*cfg.profile_1d, static_cast<int>(points), grid.spacing()), macro);
}

SpectrumReport sweep_reference(const RunConfig& cfg) {
  const auto spectral = build_operator(cfg, CouplingSpec::spectral(), CouplingSpec::spectral());
  if (cfg.sweep.reference == "lattice") {
    return lattice_reference(cfg, cfg.grid_x, cfg.macro_count >= 0 ? cfg.macro_count : spectral.macro_modes);
  }
  return eigen_symmetric(spectral, {.macro_count = cfg.macro_count});
}

std::vector<SweepRow> sweep_point(const RunConfig& base, int value, const SpectrumReport* shared) {
  RunConfig cfg = base;
  CouplingSpec test = cfg.coupling;
  if (cfg.sweep.axis == "order") {
    test = CouplingSpec::lagrangian(value);
  } else {
    const double d = base.grid_x.spacing();
    const double n_exact = base.grid_x.length * base.grid_x.ratio / (d * value);
    const long n = std::lround(n_exact);
    if (n < 1 || std::abs(n_exact - n) > 1e-9 * n_exact) {
      throw InvalidArgument("sweep.values: N = " + std::to_string(value) + " gives a non-integer patch size at fixed spacing");
    }
    cfg.grid_x = build_grid_1d(base.grid_x.length, value, static_cast<int>(n), base.grid_x.ratio);
  }
  const auto test_op = build_operator(cfg, test, test);
  const auto test_report = eigen_symmetric(test_op, {.macro_count = cfg.macro_count});
  const SpectrumReport reference = shared ? *shared : sweep_reference(cfg);
  std::vector<SweepRow> rows;
  for (const auto& row : error_table(test_report, reference, cfg.sweep.modes)) rows.push_back({value, row});
  return rows;
}

void task_sweep(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const auto& values = cfg.sweep.values;
  for (int v : values) {
    const int patches = cfg.sweep.axis == "patches" ? v : cfg.grid_x.patches;
    const int order = cfg.sweep.axis == "order" ? v : cfg.coupling.order;
    const bool lagrangian = cfg.sweep.axis == "order" || cfg.coupling.scheme == CouplingScheme::Lagrangian;
    if (lagrangian && 2 * order + 1 > patches) {
      throw InvalidArgument("sweep.values: order " + std::to_string(order) + " needs at least " +
                            std::to_string(2 * order + 1) + " patches");
    }
    if (cfg.model == Model::Diffusion2D && cfg.sweep.axis == "order" && 2 * order + 1 > cfg.grid_y.patches) {
      throw InvalidArgument("sweep.values: order " + std::to_string(order) + " exceeds the y patch count");
    }
  }

  // On the order axis every point shares the geometry, hence the reference.
  std::optional<SpectrumReport> shared;
  if (cfg.sweep.axis == "order") shared = sweep_reference(cfg);

  std::vector<std::vector<SweepRow>> results(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      try {
        results[k] = sweep_point(cfg, values[k], shared ? &*shared : nullptr);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(sweep_workers(), static_cast<int>(values.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  auto out = open_output(dir / "sweep.csv", log);
  out << cfg.sweep.axis << ",mode,test,reference,relative_error\n";
  for (const auto& rows : results)
    for (const auto& r : rows)
      out << r.value << ',' << r.error.mode << ',' << format_number(r.error.test) << ','
          << format_number(r.error.reference) << ',' << format_number(r.error.relative_error) << '\n';
}

json consistency_check(const RunConfig& cfg, const SpectrumReport& report) {
  json j = {{"applicable", false}};
  if (cfg.ensemble) return j["reason"] = "ensemble operator", j;
  if (cfg.coupling.scheme != CouplingScheme::Spectral || cfg.coupling_y.scheme != CouplingScheme::Spectral) {
    return j["reason"] = "needs spectral coupling", j;
  }
  auto lattice_points = [](const PatchGrid1D& g, int p) -> long {
    const double steps = g.length / g.spacing();
    const long m = std::lround(steps);
    if (!lattice_aligned(g, p) || std::abs(steps - m) > 1e-9 * steps || m % p != 0) return -1;
    return m;
  };
  std::vector<double> lattice;
  if (cfg.model == Model::Diffusion1D) {
    const long m = lattice_points(cfg.grid_x, cfg.profile_1d->period());
    if (m < 0) return j["reason"] = "patches are not aligned with a full lattice", j;
    lattice = lattice_macro_spectrum_1d(*cfg.profile_1d, static_cast<int>(m), cfg.grid_x.spacing(), cfg.grid_x.patches);
  } else {
    const long mx = lattice_points(cfg.grid_x, cfg.profile_2d->period_x());
    const long my = lattice_points(cfg.grid_y, cfg.profile_2d->period_y());
    if (mx < 0 || my < 0) return j["reason"] = "patches are not aligned with a full lattice", j;
    lattice = lattice_macro_spectrum_2d(*cfg.profile_2d, static_cast<int>(mx), static_cast<int>(my),
                                        cfg.grid_x.spacing(), cfg.grid_y.spacing(), cfg.grid_x.patches,
                                        cfg.grid_y.patches);
  }
  j["applicable"] = true;
  j["modes"] = report.macro_count;
  j["relative_error"] = compare_spectra(report.macro(), lattice);
  return j;
}

void task_check(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const auto op = build_operator(cfg);
  dump_operator(cfg, op, dir, log);
  json j = {{"model", to_string(cfg.model)}, {"size", op.size()}};
  if (cfg.model == Model::Wave1D) {
    const Eigen::Index m = op.size() / 2;
    j["symmetry"] = symmetry_json(symmetry_defect(Matrix(op.matrix.bottomLeftCorner(m, m))));
    j["kernel_residual"] = kernel_residual(op.matrix.bottomLeftCorner(m, m));
    j["spectrum"] = complex_summary(eigen_general(op));
  } else {
    const auto sym = symmetry_defect(op);
    j["symmetry"] = symmetry_json(sym);
    j["kernel_residual"] = kernel_residual(op.matrix);
    if (sym.relative <= 1e-10) {
      const auto report = eigen_symmetric(op, {.macro_count = cfg.macro_count});
      double top = -std::numeric_limits<double>::infinity();
      for (double v : report.eigenvalues) top = std::max(top, v);
      j["spectrum"] = {{"macro_count", report.macro_count},
                       {"gap_ratio", report.gap_ratio},
                       {"zero_mode_magnitude", report.zero_mode_magnitude},
                       {"max_eigenvalue", top}};
      j["consistency"] = consistency_check(cfg, report);
    } else {
      j["spectrum"] = complex_summary(eigen_general(op));
      j["consistency"] = {{"applicable", false}, {"reason", "operator is not symmetric"}};
    }
  }
  write_json(dir / "check.json", j, log);
}

}  // namespace

void run(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InvalidArgument("output.dir: cannot create " + out_dir.string() + ": " + ec.message());
  switch (config.task) {
    case Task::Eigen: return task_eigen(config, out_dir, log);
    case Task::Simulate: return task_simulate(config, out_dir, log);
    case Task::Homogenize: return task_homogenize(config, out_dir, log);
    case Task::Sweep: return task_sweep(config, out_dir, log);
    case Task::Check: return task_check(config, out_dir, log);
  }
}

int run_document(json document, const std::optional<std::string>& out_dir, const std::optional<std::string>& task,
                 std::ostream& log, std::ostream& err) {
  if (task) {
    if (!parse_task(*task)) {
      err << "error: --task: '" << *task << "' is not one of: eigen, simulate, homogenize, sweep, check\n";
      return kExitValidation;
    }
    if (document.is_object()) document["task"] = *task;
  }
  const auto parsed = parse_config(document);
  for (const auto& d : parsed.diagnostics) {
    err << (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ")
        << (d.field.empty() ? "" : d.field + ": ") << d.message << '\n';
  }
  if (!parsed.config) return kExitValidation;
  try {
    run(*parsed.config, out_dir ? fs::path(*out_dir) : fs::path(parsed.config->output_dir), log);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitSuccess;
}

}  // namespace patchtooth

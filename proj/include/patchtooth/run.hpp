#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "patchtooth/assembly.hpp"
#include "patchtooth/config.hpp"

namespace patchtooth {

enum ExitCode : int { kExitSuccess = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Operator described by the config (diffusion or wave), with the given
/// coupling on every axis.
AssembledOperator build_operator(const RunConfig& config, const CouplingSpec& coupling_x,
                                 const CouplingSpec& coupling_y);
AssembledOperator build_operator(const RunConfig& config);

/// Initial state sampled at the patch points (u only; the wave adds v = 0).
Vector initial_state(const RunConfig& config, const AssembledOperator& op);

/// Worker count for sweeps: PATCHTOOTH_WORKERS if set and positive, else
/// the hardware concurrency.
int sweep_workers();

/// Runs a validated config, writing outputs under `out_dir`. Throws
/// InvalidArgument or NumericalError on failure.
void run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Whole CLI pipeline on a parsed document: overrides, validation, run, and
/// the mapping of failures to exit codes. Diagnostics go to `err`.
int run_document(nlohmann::json document, const std::optional<std::string>& out_dir,
                 const std::optional<std::string>& task, std::ostream& log, std::ostream& err);

/// Shortest round-trip decimal form; used for every number written to CSV.
std::string format_number(double value);

}  // namespace patchtooth

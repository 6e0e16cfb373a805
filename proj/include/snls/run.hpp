#pragma once

#include <string>
#include <vector>

#include "snls/config.hpp"
#include "snls/error.hpp"
#include "snls/nls_solver.hpp"
#include "snls/propagators.hpp"
#include "snls/report.hpp"

namespace snls {

/// Summary and series produced by one experiment, before they hit disk.
struct RunArtifacts {
  Json summary;
  SeriesTable series;
};

/// Initial datum described by config.initial on config.grid.
ComplexField make_initial_field(const RunConfig& config);
/// Potential samples and gradient described by config.potential.
NlsProblem make_problem(const RunConfig& config);
/// Linear propagator described by config.propagator for the given potential.
PerturbedPropagator make_propagator(const RunConfig& config, const Grid& grid,
                                    std::vector<double> potential);

/// Runs a non-sweep experiment in memory. `threads` bounds worker threads.
RunArtifacts run_experiment(const RunConfig& config, int threads = 1);

/// Runs the experiment and writes summary.json and series.csv (and any
/// checkpoints) under config.output_dir, which is created if needed.
/// Sweeps write one subdirectory per value plus a top-level summary.
/// Errors propagate as snls::Error.
void run(const RunConfig& config, int threads = 1);

/// Exit status used for an error code: 2 config/parameter, 3 numerical
/// instability or invalid field, 4 I/O.
int exit_code_for(ErrorCode code);

/// {"error": {"code": ..., "exit_code": ..., "message": ...}} on one line.
std::string error_json(ErrorCode code, const std::string& message);

}  // namespace snls

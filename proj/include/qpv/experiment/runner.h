#pragma once

#include <exception>

#include "qpv/experiment/config.h"
#include "qpv/experiment/report.h"

namespace qpv {

/// Checks keys, value types and every module precondition that can be
/// checked without running. Throws ConfigError naming the offending key.
void validate_config(const ExperimentConfig& config);

/// Validates, then dispatches to the command. Sampled metrics use
/// monte_carlo with the master seed; exact metrics are tagged with their
/// evaluation method. `simulate` with trials = 0 reports no metrics. Sweeps
/// also fill Report::table.
/// Throws ConfigError, PreconditionError or IoError.
Report run_experiment(const ExperimentConfig& config);

/// CLI exit code for an exception escaping run_experiment:
/// 2 invalid config, 3 runtime precondition, 4 I/O.
int exit_code_for(const std::exception& e);

}  // namespace qpv

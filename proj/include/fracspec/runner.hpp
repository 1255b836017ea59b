#pragma once

#include "fracspec/config.hpp"
#include "fracspec/report.hpp"

namespace fracspec {

// Executes one experiment end to end: assemble, solve, run the kind-specific
// analysis, and grade its pass/fail criteria. Throws ConfigError for
// configuration problems and NumericalError for runtime numerical failures.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace fracspec

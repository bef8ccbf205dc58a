#pragma once

#include <string>
#include <vector>

#include "pqed/config.hpp"

namespace pqed {

inline constexpr const char* version_string = "0.1.0";

struct RunOptions {
  int workers = 1;
};

// Files written by a command, as full paths.
struct RunOutputs {
  std::vector<std::string> files;
};

// Time evolution of the configured system: timeseries.csv + summary.csv.
// When the convergence guard is active, the run is repeated at a doubled
// photon cutoff and rejected (SolverError) if observables drift by more than
// 1e-8 yet stabilize at a higher cutoff.
RunOutputs cmd_simulate(const RunConfig& config, const std::string& out_dir,
                        const RunOptions& options = {});

// Steady state of the configured system: summary.csv with its observables.
RunOutputs cmd_steady(const RunConfig& config, const std::string& out_dir,
                      const RunOptions& options = {});

// The configured [sweep] block: sweep.csv + summary.csv.
RunOutputs cmd_sweep(const RunConfig& config, const std::string& out_dir,
                     const RunOptions& options = {});

// Closed-form hybrid-state frequencies at the configured coupling:
// summary.csv only.
RunOutputs cmd_hybrid(const RunConfig& config, const std::string& out_dir,
                      const RunOptions& options = {});

}  // namespace pqed

#pragma once

// The four tool commands. Each returns a process exit status and writes
// human-readable progress to `log`.

#include <iosfwd>

#include "chdbc/config.hpp"

namespace chdbc {

/// Writes <name>_trace.csv, <name>_ledger.csv and <name>_snapshots.csv into output_dir.
int run_command(const RunConfig& cfg, std::ostream& log);

/// Prints B0, B0_tilde, the refined bound and both time-step condition margins.
int conditions_command(const RunConfig& cfg, std::ostream& out);

/// Refinement ladder from (K, dt) with `levels` halvings; writes <name>_orders.csv.
int convergence_command(const RunConfig& cfg, int levels, std::ostream& out);

/// Runs both configurations and writes <nameA>_vs_<nameB>.csv into a's output_dir.
int compare_command(const RunConfig& a, const RunConfig& b, std::ostream& out);

}  // namespace chdbc

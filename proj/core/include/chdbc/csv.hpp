#pragma once

// Plain CSV emission with round-trip exact numbers, and a minimal reader.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chdbc/convergence.hpp"
#include "chdbc/energy.hpp"
#include "chdbc/stepper.hpp"

namespace chdbc {

/// At most 17 significant digits; parses back to the identical double.
std::string format_number(double v);

void write_trace_csv(std::ostream& os, std::span<const StepRecord> records,
                     std::span<const double> ledger);
void write_ledger_csv(std::ostream& os, std::span<const StepRecord> records,
                      std::span<const double> ledger);
void write_snapshots_csv(std::ostream& os, std::span<const Snapshot> snapshots, const Grid& grid);
void write_order_csv(std::ostream& os, const OrderReport& report);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a header column; throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a header line and numeric rows; throws std::runtime_error on malformed input.
CsvTable read_csv(std::istream& is);

}  // namespace chdbc

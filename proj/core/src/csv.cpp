#include "chdbc/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace chdbc {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

namespace {

void write_row(std::ostream& os, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

void require_same_length(std::span<const StepRecord> records, std::span<const double> ledger) {
  if (records.size() != ledger.size()) throw std::invalid_argument("ledger and records differ in length");
}

}  // namespace

void write_trace_csv(std::ostream& os, std::span<const StepRecord> records,
                     std::span<const double> ledger) {
  require_same_length(records, ledger);
  os << "step,time,mass,energy_Jd,ledger,diss_bulk,diss_b0,diss_bK,U0,UK,min_U,max_U,fp_iters\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    write_row(os, {std::to_string(r.step), format_number(r.time), format_number(r.mass),
                   format_number(r.energy), format_number(ledger[i]), format_number(r.diss_bulk),
                   format_number(r.diss_b0), format_number(r.diss_bK), format_number(r.u_first),
                   format_number(r.u_last), format_number(r.u_min), format_number(r.u_max),
                   std::to_string(r.fp_iters)});
  }
}

void write_ledger_csv(std::ostream& os, std::span<const StepRecord> records,
                      std::span<const double> ledger) {
  require_same_length(records, ledger);
  os << "step,time,mass_drift,ledger\n";
  const double m0 = records.empty() ? 0.0 : records.front().mass;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    write_row(os, {std::to_string(r.step), format_number(r.time), format_number(r.mass - m0),
                   format_number(ledger[i])});
  }
}

void write_snapshots_csv(std::ostream& os, std::span<const Snapshot> snapshots, const Grid& grid) {
  os << "step,time,x,U\n";
  for (const auto& s : snapshots) {
    for (int k = 0; k <= grid.cells(); ++k) {
      write_row(os, {std::to_string(s.step), format_number(s.time), format_number(grid.x(k)),
                     format_number(s.u[k])});
    }
  }
}

void write_order_csv(std::ostream& os, const OrderReport& report) {
  os << "level,K,dt,steps,error,order,max_fp_iters\n";
  for (std::size_t m = 0; m < report.levels.size(); ++m) {
    const auto& l = report.levels[m];
    const bool has_order = m < report.orders.size() && report.orders[m].has_value();
    write_row(os, {std::to_string(m), std::to_string(l.cells), format_number(l.dt),
                   std::to_string(l.steps), format_number(l.error),
                   has_order ? format_number(*report.orders[m]) : std::string("nan"),
                   std::to_string(l.max_fp_iters)});
  }
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

CsvTable read_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return cells;
  };

  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
  t.header = split(line);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw std::runtime_error("CSV line " + std::to_string(line_no) + " has wrong column count");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size()) {
        throw std::runtime_error("CSV line " + std::to_string(line_no) + ": bad number '" + c + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace chdbc

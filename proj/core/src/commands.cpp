#include "chdbc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "chdbc/csv.hpp"

namespace chdbc {

namespace {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (dir / file).string());
  return os;
}

std::vector<double> ledger_for(const SimulationTrace& t) {
  return t.params.scheme == Scheme::neumann ? neumann_ledger(t.records, t.params.dt)
                                            : energy_ledger(t.records, t.params.dt);
}

SimulationTrace simulate(const RunConfig& cfg, long snapshot_stride) {
  const SchemeParams params = cfg.scheme_params();
  const ExtendedField u0 = sample_extended(cfg.ic, params.grid);
  return run(u0, params, cfg.steps, RunOptions{snapshot_stride, {}});
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& log) {
  const SimulationTrace trace = simulate(cfg, cfg.snapshot_stride);
  const auto ledger = ledger_for(trace);
  {
    auto os = open_output(cfg.output_dir, cfg.name + "_trace.csv");
    write_trace_csv(os, trace.records, ledger);
  }
  {
    auto os = open_output(cfg.output_dir, cfg.name + "_ledger.csv");
    write_ledger_csv(os, trace.records, ledger);
  }
  {
    auto os = open_output(cfg.output_dir, cfg.name + "_snapshots.csv");
    write_snapshots_csv(os, trace.snapshots, trace.params.grid);
  }

  double mass_drift = 0.0;
  double ledger_max = 0.0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    mass_drift = std::max(mass_drift, std::abs(trace.records[i].mass - trace.records[0].mass));
    ledger_max = std::max(ledger_max, std::abs(ledger[i]));
  }
  log << cfg.name << ": " << trace.records.size() - 1 << " steps, scheme "
      << to_string(cfg.scheme) << "\n"
      << "  max |mass drift| = " << format_number(mass_drift) << "\n"
      << "  max |ledger|     = " << format_number(ledger_max) << "\n";
  if (!trace.ok()) {
    log << "  FAILED at " << *trace.failure << "\n";
    return 1;
  }
  return 0;
}

int conditions_command(const RunConfig& cfg, std::ostream& out) {
  const SchemeParams params = cfg.scheme_params();
  const NodeField u0 = sample(cfg.ic, params.grid);
  BoundPack bounds = stability_bound(u0, params.grid, params.pot, params.gamma);
  const RefinedBound refined = refined_bound(cfg.ic, params.grid, params.pot, params.gamma);
  bounds.refined_bound = refined.value;
  const ConditionReport c =
      timestep_condition(bounds, params.pot, params.gamma, params.dt, params.grid.length());

  out << "name = " << cfg.name << "\n"
      << "B0 = " << format_number(bounds.B0) << "\n"
      << "B0_tilde = " << format_number(bounds.B0_tilde) << "\n"
      << "refined_bound = " << format_number(refined.value) << "\n"
      << "refined_bound_check = " << format_number(refined.value_check) << "\n"
      << "C_J = " << format_number(refined.C_J) << "\n"
      << "C_M = " << format_number(refined.C_M) << "\n"
      << "tcon_margin = " << format_number(c.tcon_margin) << "\n"
      << "tcon = " << (c.tcon_satisfied ? "satisfied" : "violated") << "\n"
      << "corollary_margin = " << format_number(c.corollary_margin) << "\n"
      << "corollary = " << (c.corollary_satisfied ? "satisfied" : "violated") << "\n";
  return 0;
}

int convergence_command(const RunConfig& cfg, int levels, std::ostream& out) {
  RefinementLadder ladder;
  ladder.base_cells = cfg.K;
  ladder.base_dt = cfg.dt;
  ladder.levels = levels;
  ladder.final_time = cfg.final_time;
  ladder.reference_factor = cfg.reference_factor;
  const OrderReport report = refine_and_measure(ladder, cfg.scheme_params(), cfg.ic);
  {
    auto os = open_output(cfg.output_dir, cfg.name + "_orders.csv");
    write_order_csv(os, report);
  }
  write_order_csv(out, report);
  out << "reference K = " << report.reference_cells << ", dt = " << format_number(report.reference_dt)
      << (report.monotone ? "" : "; errors not monotone") << "\n";
  return 0;
}

int compare_command(const RunConfig& a, const RunConfig& b, std::ostream& out) {
  if (a.L != b.L || a.dt != b.dt || a.steps != b.steps) {
    throw std::invalid_argument("compared configurations must share L, dt and steps");
  }
  const SimulationTrace ta = simulate(a, 0);
  const SimulationTrace tb = simulate(b, 0);
  const auto la = ledger_for(ta);
  const auto lb = ledger_for(tb);

  {
    auto os = open_output(a.output_dir, a.name + "_vs_" + b.name + ".csv");
    os << "step,time,mass_a,energy_a,ledger_a,U0_a,UK_a,mass_b,energy_b,ledger_b,U0_b,UK_b\n";
    const std::size_t n = std::min(ta.records.size(), tb.records.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ra = ta.records[i];
      const auto& rb = tb.records[i];
      os << ra.step << ',' << format_number(ra.time) << ',' << format_number(ra.mass) << ','
         << format_number(ra.energy) << ',' << format_number(la[i]) << ','
         << format_number(ra.u_first) << ',' << format_number(ra.u_last) << ','
         << format_number(rb.mass) << ',' << format_number(rb.energy) << ','
         << format_number(lb[i]) << ',' << format_number(rb.u_first) << ','
         << format_number(rb.u_last) << '\n';
    }
  }

  const Grid& ga = ta.params.grid;
  const Grid& gb = tb.params.grid;
  const Grid& coarse = ga.cells() <= gb.cells() ? ga : gb;
  const NodeField fa = interior(ta.final_state);
  const NodeField fb = interior(tb.final_state);
  double diff = 0.0;
  for (int k = 0; k <= coarse.cells(); ++k) {
    const double x = coarse.x(k);
    diff = std::max(diff, std::abs(interp_space(fa, ga, x) - interp_space(fb, gb, x)));
  }
  out << a.name << " vs " << b.name << ": final max |U_a - U_b| = " << format_number(diff) << "\n";
  if (!ta.ok()) out << "  " << a.name << " FAILED at " << *ta.failure << "\n";
  if (!tb.ok()) out << "  " << b.name << " FAILED at " << *tb.failure << "\n";
  return ta.ok() && tb.ok() ? 0 : 1;
}

}  // namespace chdbc

#pragma once

// Piecewise-linear space/time interpolants and grid refinement studies.

#include <optional>
#include <string>
#include <vector>

#include "chdbc/grid.hpp"
#include "chdbc/initial_condition.hpp"
#include "chdbc/stepper.hpp"

namespace chdbc {

/// Piecewise-linear interpolant of nodal values; x must lie in [0, L].
double interp_space(const NodeField& f, const Grid& grid, double x);

/// Linear interpolation in time between levels t_n and t_n + dt.
double interp_time(double a, double b, double t_n, double dt, double t);

/// Bilinear space-time interpolant on the cell [t_n, t_n + dt] x [0, L].
double interp_spacetime(const NodeField& u_n, const NodeField& u_np1, const Grid& grid, double t_n,
                        double dt, double x, double t);

struct RefinementLadder {
  int base_cells = 20;
  double base_dt = 0.05;
  int levels = 3;  // levels m = 0..levels, each halving dx and dt
  double final_time = 1.0;
  /// Reference resolution relative to the finest level; 1 means the finest
  /// level is its own reference.
  int reference_factor = 8;

  void validate() const;
  int cells(int m) const { return base_cells << m; }
  double dt(int m) const;
  long steps(int m) const;
};

struct LevelResult {
  int cells = 0;
  double dt = 0.0;
  long steps = 0;
  double error = 0.0;
  int max_fp_iters = 0;
};

struct OrderReport {
  std::vector<LevelResult> levels;
  /// orders[m] = log2(e_m / e_{m+1}); empty when either error is at the solver floor.
  std::vector<std::optional<double>> orders;
  bool monotone = true;
  int reference_cells = 0;
  double reference_dt = 0.0;

  /// Order of the finest pair with a defined order.
  std::optional<double> finest_order() const;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs every level (and the reference when reference_factor > 1) from the
/// sampled initial datum to the final time, possibly concurrently, and
/// measures the L-infinity error on the coarsest nodes.
/// max_threads <= 0 consults CHDBC_THREADS, then the hardware concurrency.
OrderReport refine_and_measure(const RefinementLadder& ladder, const SchemeParams& tmpl,
                               const FourierSeries& u0, int max_threads = 0);

/// Thread cap from CHDBC_THREADS, falling back to the hardware concurrency.
int default_thread_count();

}  // namespace chdbc

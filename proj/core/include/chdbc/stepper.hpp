#pragma once

// One implicit time step by fixed-point iteration, and whole runs.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chdbc/banded.hpp"
#include "chdbc/energy.hpp"
#include "chdbc/grid.hpp"
#include "chdbc/potential.hpp"

namespace chdbc {

enum class Scheme { dynamic_central, dynamic_onesided, neumann };

std::string_view to_string(Scheme s);
/// Accepts "dynamic-central", "dynamic-onesided", "neumann".
std::optional<Scheme> parse_scheme(std::string_view name);
BoundaryKind boundary_kind(Scheme s);

struct SchemeParams {
  Grid grid{1.0, 4};
  double dt = 0.0;
  double gamma = 0.0;
  double eps_ex = 1.0;
  DoubleWell pot{};
  Scheme scheme = Scheme::dynamic_central;
  double fp_tol = 1e-13;
  int fp_maxiter = 200;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  StepCoefficients coefficients() const;
};

struct StepResult {
  ExtendedField u_next;
  ExtendedField p;
  int iterations = 0;
  double residual = 0.0;
  /// Largest ratio of successive iterate differences seen above round-off.
  std::optional<double> contraction_ratio;
};

class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Owns the factorized step matrix for one parameter set; immutable and
/// safe to share between threads once constructed.
class Stepper {
 public:
  explicit Stepper(SchemeParams params);

  const SchemeParams& params() const { return params_; }
  const BandedMatrix& matrix() const { return matrix_; }

  /// One application of the linearized map: solves A U~ = f(u_iter, u_n).
  NodeField psi_apply(const NodeField& u_iter, const ExtendedField& u_n) const;

  /// Iterates psi_apply from u_n to a fixed point, then recovers ghosts and P.
  StepResult step(const ExtendedField& u_n) const;

  /// Ghost values and chemical potential for a given interior solution.
  StepResult complete(const NodeField& u_next, const ExtendedField& u_n) const;

 private:
  // Right-hand side and solution of A (U~ - U^n) = f(u_iter, u_n) - A U^n.
  NodeField increment_rhs(const NodeField& u_iter, const ExtendedField& u_n) const;
  NodeField psi_increment(const NodeField& u_iter, const ExtendedField& u_n) const;

  SchemeParams params_;
  StepCoefficients coeffs_;
  BandedMatrix matrix_;
  BandedLU lu_;
};

/// Largest scaled pointwise residual of the scheme's equations for a
/// completed step: |sum of terms| / (1 + sum of |terms|).
double scheme_residual(const ExtendedField& u_n, const StepResult& r, const SchemeParams& params);

/// Ghost layer for initial node data: quadratic extrapolation for the
/// dynamic schemes, reflection for the Neumann scheme.
ExtendedField initial_extension(const NodeField& u0, Scheme scheme);

/// Forces reflected ghosts when the scheme requires them; otherwise returns u0.
ExtendedField conform_initial(const ExtendedField& u0, Scheme scheme);

struct Snapshot {
  long step = 0;
  double time = 0.0;
  NodeField u;
};

struct RunOptions {
  long snapshot_stride = 0;  // 0 disables snapshots
  std::function<void(const StepRecord&)> observer;
};

struct SimulationTrace {
  SchemeParams params;
  std::vector<StepRecord> records;
  std::vector<Snapshot> snapshots;
  BoundPack bounds;
  ConditionReport condition;
  ExtendedField final_state;
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
};

SimulationTrace run(const ExtendedField& u0, const SchemeParams& params, long n_steps,
                    const RunOptions& options = {});

/// Left-hand side of the solvability time-step condition for these bounds.
double contraction_margin(const SchemeParams& params, const BoundPack& bounds);

}  // namespace chdbc

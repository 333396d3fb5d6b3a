#pragma once

// Discrete energies, mass, dissipation rates, ledgers and a priori bounds.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chdbc/grid.hpp"
#include "chdbc/initial_condition.hpp"
#include "chdbc/potential.hpp"

namespace chdbc {

/// sum_{k<K} (gamma/2)(delta+ U_k)^2 dx + trapezoidal sum of F(U_k).
template <SmoothPotential P>
double discrete_energy(const NodeField& u, const Grid& grid, const P& pot, double gamma) {
  detail::require_matching(u, grid);
  const double dx = grid.dx();
  double grad = 0.0;
  for (int k = 0; k < grid.cells(); ++k) {
    const double d = (u[k + 1] - u[k]) / dx;
    grad += d * d;
  }
  double pot_sum = 0.5 * (pot.value(u[0]) + pot.value(u[grid.cells()]));
  for (int k = 1; k < grid.cells(); ++k) pot_sum += pot.value(u[k]);
  return (0.5 * gamma * grad + pot_sum) * dx;
}

/// Average of the forward-local and backward-local energy sums.
template <SmoothPotential P>
double discrete_energy_averaged(const NodeField& u, const Grid& grid, const P& pot, double gamma) {
  detail::require_matching(u, grid);
  const double dx = grid.dx();
  const int K = grid.cells();
  auto local = [&](int k, int j) {
    const double d = (u[j] - u[k]) / dx;
    return 0.5 * gamma * d * d + pot.value(u[k]);
  };
  double forward = 0.0;
  double backward = 0.0;
  for (int k = 0; k < K; ++k) forward += local(k, k + 1);
  for (int k = 1; k <= K; ++k) backward += local(k, k - 1);
  return 0.5 * (forward + backward) * dx;
}

template <int G>
double discrete_mass(const BasicField<G>& u, const Grid& grid) {
  return trap_sum(u, grid);
}

/// Two-sided energy of the Neumann scheme; uses the ghost values of u.
template <SmoothPotential P>
double neumann_energy(const ExtendedField& u, const Grid& grid, const P& pot, double gamma) {
  detail::require_matching(u, grid);
  const double dx = grid.dx();
  const int K = grid.cells();
  double s = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double fwd = (u[k + 1] - u[k]) / dx;
    const double bwd = (u[k] - u[k - 1]) / dx;
    const double g = 0.25 * gamma * (fwd * fwd + bwd * bwd) + pot.value(u[k]);
    s += (k == 0 || k == K) ? 0.5 * g : g;
  }
  return s * dx;
}

struct EnergyReport {
  double Jd = 0.0;
  double Md = 0.0;
  std::pair<double, double> boundary_dissipation{0.0, 0.0};
  double bulk_dissipation = 0.0;

  /// The discrete time derivative of the energy implied by the three terms; never positive.
  double total() const {
    return -(boundary_dissipation.first + boundary_dissipation.second + bulk_dissipation);
  }
};

struct DissipationParams {
  double dt = 0.0;
  double gamma = 0.0;
  double eps_ex = 1.0;
};

/// Dissipation of the step u_n -> u_np1 with half-step potential p.
/// Jd and Md are those of u_np1.
template <SmoothPotential P>
EnergyReport dissipation_rate(const NodeField& u_n, const NodeField& u_np1, const NodeField& p,
                              const Grid& grid, const P& pot, const DissipationParams& w) {
  detail::require_matching(u_n, grid);
  detail::require_matching(u_np1, grid);
  detail::require_matching(p, grid);
  const int K = grid.cells();
  const double rate0 = (u_np1[0] - u_n[0]) / w.dt;
  const double rateK = (u_np1[K] - u_n[K]) / w.dt;
  EnergyReport r;
  r.Jd = discrete_energy(u_np1, grid, pot, w.gamma);
  r.Md = discrete_mass(u_np1, grid);
  r.boundary_dissipation = {w.gamma * w.eps_ex * rate0 * rate0, w.gamma * w.eps_ex * rateK * rateK};
  r.bulk_dissipation = dirichlet_seminorm_sq(p.nodes(), grid.dx());
  return r;
}

/// sum'' (|delta+ P|^2 + |delta- P|^2)/2 dx using the ghosts of p.
double neumann_bulk_dissipation(const ExtendedField& p, const Grid& grid);

/// Per-step diagnostics. Row n describes U^(n); the dissipation terms and
/// fixed-point counters belong to the step that produced it (zero at n = 0).
struct StepRecord {
  long step = 0;
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double diss_bulk = 0.0;
  double diss_b0 = 0.0;
  double diss_bK = 0.0;
  double u_first = 0.0;
  double u_last = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double u_linf = 0.0;
  int fp_iters = 0;
  double fp_residual = 0.0;
  std::optional<double> contraction_ratio;
};

/// E_d^(n) - Jd(U^(0)), accumulating the dissipation with a left Riemann sum.
std::vector<double> energy_ledger(std::span<const StepRecord> records, double dt);

/// A_d^(n) - Jbar_d(U^(0)) for records whose energy and bulk terms are the
/// two-sided Neumann quantities; identical accumulation rule.
std::vector<double> neumann_ledger(std::span<const StepRecord> records, double dt);

struct BoundPack {
  double B0 = 0.0;
  double B0_tilde = 0.0;
  std::optional<double> refined_bound;
};

template <SmoothPotential P>
BoundPack stability_bound(const NodeField& u0, const Grid& grid, const P& pot, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const double inf = pot.infimum();
  if (!std::isfinite(inf)) throw std::invalid_argument("potential must be bounded below");
  const double L = grid.length();
  const double jd = discrete_energy(u0, grid, pot, gamma);
  const double inner = (2.0 / gamma) * (jd + L * std::abs(std::min(inf, 0.0)));
  BoundPack b;
  b.B0 = std::sqrt(std::max(inner, 0.0));
  b.B0_tilde = std::abs(discrete_mass(u0, grid)) / L + std::sqrt(L) * b.B0;
  return b;
}

struct RefinedBound {
  double value = 0.0;         // on the 10K-interval quadrature
  double value_check = 0.0;   // same with 20K intervals
  double C_J = 0.0;
  double C_M = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double J_u0 = 0.0;
  double M_u0 = 0.0;
};

/// L-infinity bound from the continuous initial datum; constants by composite Simpson.
RefinedBound refined_bound(const FourierSeries& u0, const Grid& grid, const DoubleWell& pot,
                           double gamma);

struct ConditionReport {
  double tcon_margin = 0.0;
  bool tcon_satisfied = false;
  double corollary_margin = 0.0;
  bool corollary_satisfied = false;
};

/// Left-hand sides of the solvability time-step condition and its
/// double-well specialization; satisfied iff < 1.
ConditionReport timestep_condition(const BoundPack& bounds, const DoubleWell& pot, double gamma,
                                   double dt, double length);

}  // namespace chdbc

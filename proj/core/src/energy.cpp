#include "chdbc/energy.hpp"

#include <algorithm>

namespace chdbc {

double neumann_bulk_dissipation(const ExtendedField& p, const Grid& grid) {
  detail::require_matching(p, grid);
  const double dx = grid.dx();
  const int K = grid.cells();
  double s = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double fwd = (p[k + 1] - p[k]) / dx;
    const double bwd = (p[k] - p[k - 1]) / dx;
    const double g = 0.5 * (fwd * fwd + bwd * bwd);
    s += (k == 0 || k == K) ? 0.5 * g : g;
  }
  return s * dx;
}

namespace {

std::vector<double> accumulate_ledger(std::span<const StepRecord> records, double dt) {
  std::vector<double> out;
  if (records.empty()) return out;
  out.reserve(records.size());
  const double j0 = records.front().energy;
  double dissipated = 0.0;
  out.push_back(0.0);
  for (std::size_t n = 1; n < records.size(); ++n) {
    const auto& r = records[n];
    dissipated += (r.diss_bulk + r.diss_b0 + r.diss_bK) * dt;
    out.push_back(r.energy - j0 + dissipated);
  }
  return out;
}

// Composite Simpson rule on [0, L] with an even number of intervals.
template <class Fn>
double simpson(Fn&& f, double length, int intervals) {
  const double h = length / intervals;
  double s = f(0.0) + f(length);
  for (int i = 1; i < intervals; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

struct RefinedParts {
  double J = 0.0;
  double M = 0.0;
  double int_g2 = 0.0;
  double int_u2 = 0.0;
};

RefinedParts refined_parts(const FourierSeries& u0, const DoubleWell& pot, double gamma,
                           double length, int intervals) {
  RefinedParts parts;
  parts.J = simpson(
      [&](double x) {
        const double d = u0.derivative(1, x);
        return 0.5 * gamma * d * d + pot.value(u0(x));
      },
      length, intervals);
  parts.M = simpson([&](double x) { return u0(x); }, length, intervals);
  parts.int_g2 = simpson(
      [&](double x) {
        const double u = u0(x);
        const double u1 = u0.derivative(1, x);
        const double u2 = u0.derivative(2, x);
        const double u3 = u0.derivative(3, x);
        return std::abs(gamma * (u2 * u2 + u1 * u3) + pot.d2(u) * u1 * u1 + pot.d1(u) * u2);
      },
      length, intervals);
  parts.int_u2 = simpson([&](double x) { return std::abs(u0.derivative(2, x)); }, length, intervals);
  return parts;
}

}  // namespace

std::vector<double> energy_ledger(std::span<const StepRecord> records, double dt) {
  return accumulate_ledger(records, dt);
}

std::vector<double> neumann_ledger(std::span<const StepRecord> records, double dt) {
  return accumulate_ledger(records, dt);
}

RefinedBound refined_bound(const FourierSeries& u0, const Grid& grid, const DoubleWell& pot,
                           double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const double L = grid.length();
  const int coarse = 10 * grid.cells();
  const int fine = 2 * coarse;

  RefinedBound out;
  for (int i = 0; i <= fine; ++i) {
    const double x = L * i / fine;
    out.A1 = std::max(out.A1, std::abs(u0.derivative(1, x)));
    out.A2 = std::max(out.A2, std::abs(u0.derivative(2, x)));
  }

  const double inf_part = L * std::abs(std::min(pot.infimum(), 0.0));
  auto evaluate = [&](const RefinedParts& p, double& cj, double& cm) {
    cj = L * L * (p.int_g2 / 8.0 + 0.5 * gamma * (out.A1 * out.A2 + 0.25 * L * out.A2 * out.A2));
    cm = L * L * p.int_u2 / 8.0;
    const double inner = (2.0 * L / gamma) * (p.J + cj + inf_part);
    return (std::abs(p.M) + cm) / L + std::sqrt(std::max(inner, 0.0));
  };

  const RefinedParts pc = refined_parts(u0, pot, gamma, L, coarse);
  const RefinedParts pf = refined_parts(u0, pot, gamma, L, fine);
  double cj_fine = 0.0;
  double cm_fine = 0.0;
  out.value = evaluate(pc, out.C_J, out.C_M);
  out.value_check = evaluate(pf, cj_fine, cm_fine);
  out.J_u0 = pc.J;
  out.M_u0 = pc.M;
  return out;
}

ConditionReport timestep_condition(const BoundPack& bounds, const DoubleWell& pot, double gamma,
                                   double dt, double length) {
  if (!(gamma > 0.0) || !(dt > 0.0) || !(length > 0.0)) {
    throw std::invalid_argument("gamma, dt and length must be positive");
  }
  const double scale = std::sqrt(dt / (2.0 * gamma));
  const double radius = 2.0 * bounds.B0_tilde;
  const double m2 = pot.max_abs_derivative(2, radius);
  const double m3 = pot.max_abs_derivative(3, radius);

  ConditionReport c;
  c.tcon_margin =
      std::max(1.5 * m2, 0.5 * m2 + 5.0 * std::sqrt(length) * bounds.B0 / 6.0 * m3) * scale;
  c.tcon_satisfied = c.tcon_margin < 1.0;

  const double q = pot.q();
  const double r = pot.r();
  const double bt2 = bounds.B0_tilde * bounds.B0_tilde;
  c.corollary_margin =
      std::max({1.5 * r, 8.5 * q * bt2 + 0.5 * r, 12.75 * q * bt2 - 0.5 * r}) * scale;
  c.corollary_satisfied = c.corollary_margin < 1.0;
  return c;
}

}  // namespace chdbc

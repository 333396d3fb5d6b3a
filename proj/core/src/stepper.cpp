#include "chdbc/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>

namespace chdbc {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::dynamic_central: return "dynamic-central";
    case Scheme::dynamic_onesided: return "dynamic-onesided";
    case Scheme::neumann: return "neumann";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "dynamic-central") return Scheme::dynamic_central;
  if (name == "dynamic-onesided") return Scheme::dynamic_onesided;
  if (name == "neumann") return Scheme::neumann;
  return std::nullopt;
}

BoundaryKind boundary_kind(Scheme s) {
  switch (s) {
    case Scheme::dynamic_central: return BoundaryKind::dynamic;
    case Scheme::dynamic_onesided: return BoundaryKind::dynamic_onesided;
    case Scheme::neumann: return BoundaryKind::neumann;
  }
  return BoundaryKind::dynamic;
}

void SchemeParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
  };
  positive(dt, "dt");
  positive(gamma, "gamma");
  positive(eps_ex, "eps_ex");
  positive(fp_tol, "fp_tol");
  if (fp_maxiter < 1) throw std::invalid_argument("fp_maxiter must be at least 1");
  if (grid.cells() < 4) throw std::invalid_argument("the step system needs K >= 4");
}

StepCoefficients SchemeParams::coefficients() const {
  return StepCoefficients::from(grid, dt, gamma, eps_ex);
}

namespace {

SchemeParams validated(SchemeParams p) {
  p.validate();
  return p;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

Stepper::Stepper(SchemeParams params)
    : params_(validated(std::move(params))),
      coeffs_(params_.coefficients()),
      matrix_(assemble(params_.grid.cells(), coeffs_, boundary_kind(params_.scheme))),
      lu_(matrix_) {}

NodeField Stepper::increment_rhs(const NodeField& u_iter, const ExtendedField& u_n) const {
  const int K = params_.grid.cells();
  const double dx = params_.grid.dx();
  const double c = params_.dt / (dx * dx);
  const double g = params_.gamma / (dx * dx);

  // R is the chemical potential with the current iterate in the quotient and
  // u_n in the gradient term; the 1/alpha boundary terms cancel exactly.
  std::vector<double> r(static_cast<std::size_t>(K + 1), 0.0);
  NodeField f(K);

  if (params_.scheme == Scheme::dynamic_onesided) {
    for (int k = 1; k < K; ++k) {
      const double s = u_n[k + 1] - 2.0 * u_n[k] + u_n[k - 1];
      r[k] = difference_quotient(params_.pot, u_iter[k], u_n[k]) - g * s;
    }
    r[0] = r[1];
    r[K] = r[K - 1];
    const double a4 = 4.0 * coeffs_.alpha;
    f[0] = a4 * (u_n[1] - u_n[0]);
    f[K] = a4 * (u_n[K - 1] - u_n[K]);
    for (int k = 1; k < K; ++k) f[k] = c * (r[k + 1] - 2.0 * r[k] + r[k - 1]);
    return f;
  }

  for (int k = 0; k <= K; ++k) {
    double s;
    if (k == 0) {
      s = 2.0 * (u_n[1] - u_n[0]);
    } else if (k == K) {
      s = 2.0 * (u_n[K - 1] - u_n[K]);
    } else {
      s = u_n[k + 1] - 2.0 * u_n[k] + u_n[k - 1];
    }
    r[k] = difference_quotient(params_.pot, u_iter[k], u_n[k]) - g * s;
  }
  f[0] = 2.0 * c * (r[1] - r[0]);
  f[K] = 2.0 * c * (r[K - 1] - r[K]);
  for (int k = 1; k < K; ++k) f[k] = c * (r[k + 1] - 2.0 * r[k] + r[k - 1]);
  return f;
}

NodeField Stepper::psi_increment(const NodeField& u_iter, const ExtendedField& u_n) const {
  return lu_.solve(increment_rhs(u_iter, u_n));
}

NodeField Stepper::psi_apply(const NodeField& u_iter, const ExtendedField& u_n) const {
  detail::require_matching(u_iter, params_.grid);
  detail::require_matching(u_n, params_.grid);
  NodeField u = psi_increment(u_iter, u_n);
  for (int k = 0; k <= params_.grid.cells(); ++k) u[k] += u_n[k];
  return u;
}

StepResult Stepper::complete(const NodeField& u_next, const ExtendedField& u_n) const {
  const int K = params_.grid.cells();
  const double dx = params_.grid.dx();
  const double dx2 = dx * dx;
  const double gamma = params_.gamma;
  const double inv_alpha = 1.0 / coeffs_.alpha;

  ExtendedField u = with_ghosts(u_next, 0.0, 0.0);
  ExtendedField p(K);
  auto w = [&](int k) { return 0.5 * (u[k] + u_n[k]); };
  auto df = [&](int k) { return difference_quotient(params_.pot, u[k], u_n[k]); };
  auto potential_at = [&](int k) { return -gamma * (w(k + 1) - 2.0 * w(k) + w(k - 1)) / dx2 + df(k); };

  switch (params_.scheme) {
    case Scheme::dynamic_central:
      u[-1] = u[1] + u_n[1] - u_n[-1] - inv_alpha * (u[0] - u_n[0]);
      u[K + 1] = u[K - 1] + u_n[K - 1] - u_n[K + 1] - inv_alpha * (u[K] - u_n[K]);
      [[fallthrough]];
    case Scheme::neumann:
      if (params_.scheme == Scheme::neumann) {
        u[-1] = u[1];
        u[K + 1] = u[K - 1];
      }
      for (int k = 0; k <= K; ++k) p[k] = potential_at(k);
      p[-1] = p[1];
      p[K + 1] = p[K - 1];
      break;
    case Scheme::dynamic_onesided: {
      for (int k = 1; k < K; ++k) p[k] = potential_at(k);
      p[0] = p[1];
      p[K] = p[K - 1];
      p[-1] = p[0] + dx2 * (u[0] - u_n[0]) / params_.dt;
      p[K + 1] = p[K] + dx2 * (u[K] - u_n[K]) / params_.dt;
      const double w_left = (df(0) - p[0]) * dx2 / gamma - w(1) + 2.0 * w(0);
      const double w_right = (df(K) - p[K]) * dx2 / gamma - w(K - 1) + 2.0 * w(K);
      u[-1] = 2.0 * w_left - u_n[-1];
      u[K + 1] = 2.0 * w_right - u_n[K + 1];
      break;
    }
  }
  return StepResult{std::move(u), std::move(p), 0, 0.0, std::nullopt};
}

StepResult Stepper::step(const ExtendedField& u_n) const {
  detail::require_matching(u_n, params_.grid);
  const int K = params_.grid.cells();
  NodeField current = interior(u_n);
  NodeField increment(K);
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * (1.0 + linf_norm(current));
  double previous_diff = -1.0;
  std::optional<double> worst_ratio;

  for (int m = 1; m <= params_.fp_maxiter; ++m) {
    NodeField next(K);
    try {
      next = psi_increment(current, u_n);
    } catch (const std::invalid_argument&) {
      throw StepFailure("fixed-point iterate became non-finite", m, previous_diff);
    }
    const double diff = max_abs_diff(next.nodes(), increment.nodes());
    if (!std::isfinite(diff)) {
      throw StepFailure("fixed-point iterate became non-finite", m, diff);
    }
    if (previous_diff > floor && diff > floor) {
      const double ratio = diff / previous_diff;
      worst_ratio = worst_ratio ? std::max(*worst_ratio, ratio) : ratio;
    }
    increment = std::move(next);
    for (int k = 0; k <= K; ++k) current[k] = u_n[k] + increment[k];
    if (diff <= params_.fp_tol) {
      StepResult r = complete(current, u_n);
      r.iterations = m;
      r.residual = diff;
      r.contraction_ratio = worst_ratio;
      return r;
    }
    previous_diff = diff;
  }
  char last[32];
  std::snprintf(last, sizeof(last), "%.3e", previous_diff);
  throw StepFailure("fixed-point iteration did not reach fp_tol within " +
                        std::to_string(params_.fp_maxiter) + " iterations (last update " + last + ")",
                    params_.fp_maxiter, previous_diff);
}

double scheme_residual(const ExtendedField& u_n, const StepResult& r, const SchemeParams& params) {
  const int K = params.grid.cells();
  const double dx = params.grid.dx();
  const double dx2 = dx * dx;
  const double dt = params.dt;
  const double gamma = params.gamma;
  const double eps = params.eps_ex;
  const ExtendedField& u = r.u_next;
  const ExtendedField& p = r.p;
  auto w = [&](int k) { return 0.5 * (u[k] + u_n[k]); };

  double worst = 0.0;
  auto check = [&](std::initializer_list<double> terms) {
    double sum = 0.0;
    double mag = 0.0;
    for (double t : terms) {
      sum += t;
      mag += std::abs(t);
    }
    worst = std::max(worst, std::abs(sum) / (1.0 + mag));
  };

  for (int k = 0; k <= K; ++k) {
    check({(u[k] - u_n[k]) / dt, -p[k + 1] / dx2, 2.0 * p[k] / dx2, -p[k - 1] / dx2});
    check({p[k], gamma * w(k + 1) / dx2, -2.0 * gamma * w(k) / dx2, gamma * w(k - 1) / dx2,
           -difference_quotient(params.pot, u[k], u_n[k])});
  }
  switch (params.scheme) {
    case Scheme::dynamic_central:
      check({eps * (u[0] - u_n[0]) / dt, -w(1) / (2.0 * dx), w(-1) / (2.0 * dx)});
      check({eps * (u[K] - u_n[K]) / dt, w(K + 1) / (2.0 * dx), -w(K - 1) / (2.0 * dx)});
      check({p[-1], -p[1]});
      check({p[K + 1], -p[K - 1]});
      break;
    case Scheme::neumann:
      check({u[-1], -u[1]});
      check({u[K + 1], -u[K - 1]});
      check({p[-1], -p[1]});
      check({p[K + 1], -p[K - 1]});
      break;
    case Scheme::dynamic_onesided:
      check({eps * (u[0] - u_n[0]) / dt, -w(1) / dx, w(0) / dx});
      check({eps * (u[K] - u_n[K]) / dt, w(K) / dx, -w(K - 1) / dx});
      check({p[0], -p[1]});
      check({p[K], -p[K - 1]});
      break;
  }
  return worst;
}

ExtendedField initial_extension(const NodeField& u0, Scheme scheme) {
  const int K = u0.cells();
  if (K < 2) throw std::invalid_argument("initial data needs K >= 2");
  if (scheme == Scheme::neumann) return with_ghosts(u0, u0[1], u0[K - 1]);
  const double left = 3.0 * u0[0] - 3.0 * u0[1] + u0[2];
  const double right = 3.0 * u0[K] - 3.0 * u0[K - 1] + u0[K - 2];
  return with_ghosts(u0, left, right);
}

ExtendedField conform_initial(const ExtendedField& u0, Scheme scheme) {
  if (scheme != Scheme::neumann) return u0;
  ExtendedField u = u0;
  u[-1] = u[1];
  u[u.cells() + 1] = u[u.cells() - 1];
  return u;
}

namespace {

StepRecord describe(const ExtendedField& u, const SchemeParams& params, long n) {
  const Grid& grid = params.grid;
  const auto nodes = u.nodes();
  StepRecord rec;
  rec.step = n;
  rec.time = static_cast<double>(n) * params.dt;
  rec.mass = trap_sum(nodes, grid.dx());
  rec.energy = params.scheme == Scheme::neumann
                   ? neumann_energy(u, grid, params.pot, params.gamma)
                   : discrete_energy(interior(u), grid, params.pot, params.gamma);
  rec.u_first = nodes.front();
  rec.u_last = nodes.back();
  const auto [lo, hi] = std::minmax_element(nodes.begin(), nodes.end());
  rec.u_min = *lo;
  rec.u_max = *hi;
  rec.u_linf = linf_norm(nodes);
  return rec;
}

}  // namespace

SimulationTrace run(const ExtendedField& u0, const SchemeParams& params, long n_steps,
                    const RunOptions& options) {
  if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
  const Stepper stepper(params);
  detail::require_matching(u0, params.grid);

  SimulationTrace trace;
  trace.params = params;
  ExtendedField u = conform_initial(u0, params.scheme);
  trace.bounds = stability_bound(interior(u), params.grid, params.pot, params.gamma);
  trace.condition =
      timestep_condition(trace.bounds, params.pot, params.gamma, params.dt, params.grid.length());
  trace.records.reserve(static_cast<std::size_t>(n_steps + 1));

  auto emit = [&](const StepRecord& rec, long n) {
    trace.records.push_back(rec);
    if (options.observer) options.observer(rec);
    if (options.snapshot_stride > 0 && (n % options.snapshot_stride == 0 || n == n_steps)) {
      trace.snapshots.push_back({n, rec.time, interior(u)});
    }
  };
  emit(describe(u, params, 0), 0);

  const DissipationParams weights{params.dt, params.gamma, params.eps_ex};
  for (long n = 1; n <= n_steps; ++n) {
    StepResult r;
    try {
      r = stepper.step(u);
    } catch (const StepFailure& e) {
      trace.failure = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
    StepRecord rec = describe(r.u_next, params, n);
    if (params.scheme == Scheme::neumann) {
      rec.diss_bulk = neumann_bulk_dissipation(r.p, params.grid);
    } else {
      const EnergyReport e = dissipation_rate(interior(u), interior(r.u_next), interior(r.p),
                                              params.grid, params.pot, weights);
      rec.diss_bulk = e.bulk_dissipation;
      rec.diss_b0 = e.boundary_dissipation.first;
      rec.diss_bK = e.boundary_dissipation.second;
    }
    rec.fp_iters = r.iterations;
    rec.fp_residual = r.residual;
    rec.contraction_ratio = r.contraction_ratio;
    u = std::move(r.u_next);
    emit(rec, n);
  }
  trace.final_state = u;
  return trace;
}

double contraction_margin(const SchemeParams& params, const BoundPack& bounds) {
  return timestep_condition(bounds, params.pot, params.gamma, params.dt, params.grid.length())
      .tcon_margin;
}

}  // namespace chdbc

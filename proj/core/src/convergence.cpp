#include "chdbc/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

namespace chdbc {

double interp_space(const NodeField& f, const Grid& grid, double x) {
  detail::require_matching(f, grid);
  const double L = grid.length();
  if (!(x >= 0.0 && x <= L)) throw std::out_of_range("interpolation point outside [0, L]");
  const double s = x / grid.dx();
  const int k = std::min(static_cast<int>(std::floor(s)), grid.cells() - 1);
  const double theta = s - k;
  return (1.0 - theta) * f[k] + theta * f[k + 1];
}

double interp_time(double a, double b, double t_n, double dt, double t) {
  const double theta = (t - t_n) / dt;
  return (1.0 - theta) * a + theta * b;
}

double interp_spacetime(const NodeField& u_n, const NodeField& u_np1, const Grid& grid, double t_n,
                        double dt, double x, double t) {
  if (!(t >= t_n && t <= t_n + dt)) throw std::out_of_range("time outside the step interval");
  return interp_time(interp_space(u_n, grid, x), interp_space(u_np1, grid, x), t_n, dt, t);
}

void RefinementLadder::validate() const {
  if (base_cells < 4) throw std::invalid_argument("ladder base needs K >= 4");
  if (levels < 1) throw std::invalid_argument("ladder needs at least two levels");
  if (!(base_dt > 0.0) || !(final_time > 0.0)) {
    throw std::invalid_argument("ladder dt and final time must be positive");
  }
  if (reference_factor < 1 || (reference_factor & (reference_factor - 1)) != 0) {
    throw std::invalid_argument("reference factor must be a power of two");
  }
  for (int m = 0; m <= levels; ++m) steps(m);
}

double RefinementLadder::dt(int m) const { return base_dt / static_cast<double>(1L << m); }

long RefinementLadder::steps(int m) const {
  const double n = final_time / dt(m);
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    throw std::invalid_argument("final time is not an integer multiple of dt at level " +
                                std::to_string(m));
  }
  return static_cast<long>(rounded);
}

std::optional<double> OrderReport::finest_order() const {
  for (auto it = orders.rbegin(); it != orders.rend(); ++it) {
    if (*it) return *it;
  }
  return std::nullopt;
}

int default_thread_count() {
  if (const char* env = std::getenv("CHDBC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

struct Job {
  int cells;
  double dt;
  long steps;
};

struct JobOutcome {
  NodeField final_state;
  int max_fp_iters = 0;
};

JobOutcome run_job(const Job& job, const SchemeParams& tmpl, const FourierSeries& u0) {
  SchemeParams p = tmpl;
  p.grid = Grid(tmpl.grid.length(), job.cells);
  p.dt = job.dt;
  const SimulationTrace trace = run(conform_initial(sample_extended(u0, p.grid), p.scheme), p, job.steps);
  if (!trace.ok()) {
    throw ConvergenceFailure("level K=" + std::to_string(job.cells) + " failed: " + *trace.failure);
  }
  JobOutcome out{interior(trace.final_state), 0};
  for (const auto& r : trace.records) out.max_fp_iters = std::max(out.max_fp_iters, r.fp_iters);
  return out;
}

}  // namespace

OrderReport refine_and_measure(const RefinementLadder& ladder, const SchemeParams& tmpl,
                               const FourierSeries& u0, int max_threads) {
  ladder.validate();
  std::vector<Job> jobs;
  for (int m = 0; m <= ladder.levels; ++m) jobs.push_back({ladder.cells(m), ladder.dt(m), ladder.steps(m)});
  if (ladder.reference_factor > 1) {
    const auto& finest = jobs.back();
    jobs.push_back({finest.cells * ladder.reference_factor, finest.dt / ladder.reference_factor,
                    finest.steps * ladder.reference_factor});
  }

  std::vector<std::optional<JobOutcome>> outcomes(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        outcomes[i] = run_job(jobs[i], tmpl, u0);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(max_threads > 0 ? max_threads : default_thread_count(), 1,
                                 static_cast<int>(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const Job& ref_job = jobs.back();
  const NodeField& reference = outcomes.back()->final_state;
  const Grid ref_grid(tmpl.grid.length(), ref_job.cells);
  const Grid coarse(tmpl.grid.length(), ladder.base_cells);

  OrderReport report;
  report.reference_cells = ref_job.cells;
  report.reference_dt = ref_job.dt;
  for (int m = 0; m <= ladder.levels; ++m) {
    const Job& job = jobs[static_cast<std::size_t>(m)];
    const Grid grid(tmpl.grid.length(), job.cells);
    const JobOutcome& out = *outcomes[static_cast<std::size_t>(m)];
    double err = 0.0;
    for (int k = 0; k <= coarse.cells(); ++k) {
      const double x = coarse.x(k);
      err = std::max(err, std::abs(interp_space(reference, ref_grid, x) -
                                   interp_space(out.final_state, grid, x)));
    }
    report.levels.push_back({job.cells, job.dt, job.steps, err, out.max_fp_iters});
  }

  const double floor = 100.0 * tmpl.fp_tol;
  for (std::size_t m = 0; m + 1 < report.levels.size(); ++m) {
    const double a = report.levels[m].error;
    const double b = report.levels[m + 1].error;
    if (a > floor && b > floor) {
      report.orders.emplace_back(std::log2(a / b));
      if (b > a) report.monotone = false;
    } else {
      report.orders.emplace_back(std::nullopt);
    }
  }
  return report;
}

}  // namespace chdbc

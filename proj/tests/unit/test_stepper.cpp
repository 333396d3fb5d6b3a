#include <chdbc/initial_condition.hpp>
#include <chdbc/stepper.hpp>

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace chdbc;

namespace {

SchemeParams small_params(Scheme s, int cells) {
  SchemeParams p;
  p.grid = Grid(2.0, cells);
  p.dt = 1e-3;
  p.gamma = 0.5;
  p.scheme = s;
  return p;
}

std::vector<double> values(const ExtendedField& f) {
  std::vector<double> v;
  for (int k = -1; k <= f.cells() + 1; ++k) v.push_back(f[k]);
  return v;
}

}  // namespace

TEST_CASE("scheme names") {
  for (auto s : {Scheme::dynamic_central, Scheme::dynamic_onesided, Scheme::neumann}) {
    CHECK(parse_scheme(to_string(s)) == s);
  }
  CHECK_FALSE(parse_scheme("dirichlet").has_value());
  CHECK(boundary_kind(Scheme::neumann) == BoundaryKind::neumann);
}

TEST_CASE("parameter validation") {
  auto p = small_params(Scheme::dynamic_central, 8);
  CHECK_NOTHROW(p.validate());
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = small_params(Scheme::dynamic_central, 3);
  CHECK_THROWS_AS(Stepper{p}, std::invalid_argument);
  p = small_params(Scheme::dynamic_central, 8);
  p.eps_ex = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("constant states are stationary") {
  for (auto s : {Scheme::dynamic_central, Scheme::dynamic_onesided, Scheme::neumann}) {
    const Stepper st(small_params(s, 10));
    const ExtendedField u(10, 0.3);
    const auto r = st.step(u);
    CHECK(r.iterations == 1);
    for (int k = -1; k <= 11; ++k) {
      CHECK(r.u_next[k] == doctest::Approx(0.3).epsilon(1e-14));
      CHECK(r.p[k] == doctest::Approx(DoubleWell{}.d1(0.3)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fixed point of the linearized map") {
  std::mt19937_64 rng(31);
  for (auto s : {Scheme::dynamic_central, Scheme::dynamic_onesided, Scheme::neumann}) {
    const auto params = small_params(s, 12);
    const Stepper st(params);
    const auto u = conform_initial(oracle::random_smooth_state(params.grid, rng, 0.6), s);
    const auto r = st.step(u);
    const NodeField again = st.psi_apply(interior(r.u_next), u);
    for (int k = 0; k <= 12; ++k) CHECK(std::abs(again[k] - r.u_next[k]) <= 1e-12);
    CHECK(scheme_residual(u, r, params) <= 1e-9);
    CHECK(r.residual <= params.fp_tol);
  }
}

TEST_CASE("agrees with a dense Newton solve of the full system") {
  std::mt19937_64 rng(41);
  for (int cells : {4, 6}) {
    for (bool dynamic : {true, false}) {
      for (int t = 0; t < 5; ++t) {
        const auto s = dynamic ? Scheme::dynamic_central : Scheme::neumann;
        auto params = small_params(s, cells);
        params.eps_ex = dynamic ? 0.5 + t : 1.0;
        const auto u = conform_initial(oracle::random_smooth_state(params.grid, rng, 0.8), s);
        const auto r = Stepper(params).step(u);

        const oracle::FullStepSystem sys{params.grid, params.dt, params.gamma, params.eps_ex,
                                         params.pot,  dynamic,   values(u)};
        const auto ref = sys.solve();
        REQUIRE(ref.residual <= 1e-9);
        for (int k = -1; k <= cells + 1; ++k) {
          CHECK(std::abs(r.u_next[k] - ref.u[static_cast<std::size_t>(k + 1)]) <= 1e-9);
        }
        for (int k = 0; k <= cells; ++k) {
          CHECK(std::abs(r.p[k] - ref.p[static_cast<std::size_t>(k)]) <=
                1e-9 * (1.0 + std::abs(ref.p[static_cast<std::size_t>(k)])));
        }
      }
    }
  }
}

TEST_CASE("first step of the first example conserves mass") {
  SchemeParams p;
  p.grid = Grid(20.0, 40);
  p.dt = 0.02;
  p.gamma = 2.0;
  const auto u0 = sample_extended(FourierSeries::builtin("example1"), p.grid);
  const auto r = Stepper(p).step(u0);
  CHECK(std::abs(trap_sum(r.u_next.nodes(), p.grid.dx()) - trap_sum(u0.nodes(), p.grid.dx())) <= 1e-12);
  CHECK(scheme_residual(u0, r, p) <= 1e-9);
}

TEST_CASE("boundary relaxation parameter") {
  std::mt19937_64 rng(5);
  for (auto s : {Scheme::dynamic_central, Scheme::neumann}) {
    auto a = small_params(s, 10);
    auto b = a;
    b.eps_ex = 1000.0;
    const auto u = conform_initial(oracle::random_smooth_state(a.grid, rng, 0.5), s);
    const auto ra = Stepper(a).step(u);
    const auto rb = Stepper(b).step(u);
    double diff = 0.0;
    for (int k = 0; k <= 10; ++k) diff = std::max(diff, std::abs(ra.u_next[k] - rb.u_next[k]));
    if (s == Scheme::neumann) {
      CHECK(diff == 0.0);
    } else {
      CHECK(diff > 0.0);
      CHECK(std::abs(rb.u_next[0] - u[0]) < std::abs(ra.u_next[0] - u[0]));
    }
  }
}

TEST_CASE("steps are deterministic") {
  std::mt19937_64 rng(77);
  const auto params = small_params(Scheme::dynamic_onesided, 16);
  const auto u = oracle::random_smooth_state(params.grid, rng, 0.7);
  const auto a = Stepper(params).step(u);
  const auto b = Stepper(params).step(u);
  CHECK(values(a.u_next) == values(b.u_next));
  CHECK(values(a.p) == values(b.p));
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("iteration cap raises a step failure") {
  std::mt19937_64 rng(3);
  auto params = small_params(Scheme::dynamic_central, 12);
  params.fp_maxiter = 1;
  const auto u = oracle::random_smooth_state(params.grid, rng, 0.7);
  CHECK_THROWS_AS(Stepper(params).step(u), StepFailure);

  auto big = small_params(Scheme::dynamic_central, 12);
  big.dt = 50.0;
  big.gamma = 1e-4;
  const ExtendedField wild = oracle::random_smooth_state(big.grid, rng, 40.0);
  const auto trace = run(wild, big, 3);
  CHECK_FALSE(trace.ok());
  CHECK(trace.failure->rfind("step 1: ", 0) == 0);
}

TEST_CASE("initial ghost layers") {
  const NodeField u(4, std::vector<double>{1, 4, 9, 16, 25});
  const auto e = initial_extension(u, Scheme::dynamic_central);
  CHECK(e[-1] == 0);
  CHECK(e[5] == 36);
  const auto n = initial_extension(u, Scheme::neumann);
  CHECK(n[-1] == 4);
  CHECK(n[5] == 16);
  CHECK(values(conform_initial(e, Scheme::neumann)) == values(n));
  CHECK(values(conform_initial(e, Scheme::dynamic_onesided)) == values(e));
}

TEST_CASE("runs record every step") {
  auto p = small_params(Scheme::dynamic_central, 16);
  p.dt = 0.01;
  const auto u0 = sample_extended(FourierSeries::parse("cos:0.1:1"), p.grid);
  int seen = 0;
  RunOptions opt;
  opt.snapshot_stride = 4;
  opt.observer = [&](const StepRecord&) { ++seen; };
  const auto trace = run(u0, p, 10, opt);
  REQUIRE(trace.ok());
  CHECK(trace.records.size() == 11);
  CHECK(seen == 11);
  CHECK(trace.snapshots.size() == 4);
  CHECK(trace.snapshots.back().step == 10);
  CHECK(trace.records[0].fp_iters == 0);
  CHECK(trace.records[0].diss_bulk == 0);
  const auto led = energy_ledger(trace.records, p.dt);
  for (double v : led) CHECK(std::abs(v) <= 1e-12);
  for (const auto& r : trace.records) CHECK(std::abs(r.mass - trace.records[0].mass) <= 1e-13);
  CHECK(run(u0, p, 0).records.size() == 1);
}

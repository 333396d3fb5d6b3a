#include <chdbc/energy.hpp>

#include <random>

#include "doctest.h"
#include "identities.hpp"

using namespace chdbc;

namespace {

struct ZeroPotential {
  double value(double) const { return 0.0; }
  double d1(double) const { return 0.0; }
  double d2(double) const { return 0.0; }
  double d3(double) const { return 0.0; }
  double d4(double) const { return 0.0; }
  double infimum() const { return 0.0; }
};

const DoubleWell well(1.0, 1.0);

StepRecord record(long n, double energy, double bulk, double b0 = 0.0, double bK = 0.0) {
  StepRecord r;
  r.step = n;
  r.energy = energy;
  r.diss_bulk = bulk;
  r.diss_b0 = b0;
  r.diss_bK = bK;
  return r;
}

}  // namespace

TEST_CASE("energy and mass of simple states") {
  const Grid g(4.0, 4);
  CHECK(discrete_energy(NodeField(4, 0.0), g, well, 1.0) == 0);
  CHECK(discrete_energy(NodeField(4, 1.0), g, well, 1.0) == doctest::Approx(-1.0));
  CHECK(discrete_mass(NodeField(4, 2.0), g) == doctest::Approx(8.0));

  // Ramp of slope one on [0, 1] with two cells: gradient part 1, potential
  // part (F(0)/2 + F(1/2) + F(1)/2) / 2 = -15/128.
  const Grid two(1.0, 2);
  const NodeField ramp(2, std::vector<double>{0.0, 0.5, 1.0});
  CHECK(discrete_energy(ramp, two, well, 2.0) == doctest::Approx(113.0 / 128.0));
  CHECK(discrete_energy(ramp, two, well, 4.0) == doctest::Approx(1.0 + 113.0 / 128.0));
  CHECK(discrete_mass(ramp, two) == doctest::Approx(0.5));
}

TEST_CASE("both energy forms agree") {
  std::mt19937_64 rng(3);
  for (int cells : {4, 16, 33}) {
    for (int t = 0; t < 100; ++t) {
      const Grid g(1.0 + t * 0.1, cells);
      const auto u = oracle::random_field<0>(cells, rng, 2.0);
      CHECK(identity::energy_forms(u, g, well, 0.3 + t * 0.05).holds(1e-12));
    }
  }
}

TEST_CASE("energy variation formula") {
  std::mt19937_64 rng(5);
  for (int cells : {4, 16, 33}) {
    for (int t = 0; t < 100; ++t) {
      const Grid g(2.0, cells);
      const auto u = oracle::random_field<1>(cells, rng, 1.5);
      const auto v = oracle::random_field<1>(cells, rng, 1.5);
      CHECK(identity::discrete_variation(u, v, g, well, 0.7).holds(1e-11));
    }
  }
}

TEST_CASE("dissipation terms") {
  const Grid g(2.0, 2);
  const NodeField same(2, std::vector<double>{0.1, 0.2, 0.3});
  NodeField p(2);
  for (int k = 0; k <= 2; ++k) p[k] = g.x(k);
  const auto r = dissipation_rate(same, same, p, g, well, {0.1, 1.0, 1.0});
  CHECK(r.bulk_dissipation == doctest::Approx(g.length()));
  CHECK(r.boundary_dissipation.first == 0);
  CHECK(r.boundary_dissipation.second == 0);
  CHECK(r.total() == doctest::Approx(-2.0));
  CHECK(r.Md == doctest::Approx(0.4));

  const NodeField moved(2, std::vector<double>{0.3, 0.2, 0.2});
  const auto s = dissipation_rate(same, moved, NodeField(2, 4.0), g, well, {0.1, 2.0, 3.0});
  CHECK(s.bulk_dissipation == 0);
  CHECK(s.boundary_dissipation.first == doctest::Approx(2.0 * 3.0 * 4.0));
  CHECK(s.boundary_dissipation.second == doctest::Approx(2.0 * 3.0 * 1.0));
  CHECK(s.total() <= 0);
}

TEST_CASE("ledger accumulation") {
  std::vector<StepRecord> one{record(0, 5.0, 9.0)};
  CHECK(energy_ledger(one, 0.1) == std::vector<double>{0.0});

  std::vector<StepRecord> recs{record(0, 5.0, 0.0), record(1, 4.0, 8.0, 1.0, 1.0),
                               record(2, 3.5, 5.0)};
  const auto led = energy_ledger(recs, 0.1);
  REQUIRE(led.size() == 3);
  CHECK(led[0] == 0);
  CHECK(led[1] == doctest::Approx(0.0));
  CHECK(led[2] == doctest::Approx(-1.5 + 1.0 + 0.5));
  CHECK(neumann_ledger(recs, 0.1) == led);
  CHECK(energy_ledger(std::span<const StepRecord>{}, 0.1).empty());
}

TEST_CASE("two-sided energy") {
  const Grid g(4.0, 4);
  const ExtendedField u(4, std::vector<double>{1, 0, 1, 0, 1, 0, 1});
  // Each node has forward and backward squared slope one.
  CHECK(neumann_energy(u, g, ZeroPotential{}, 2.0) == doctest::Approx(4.0));
  const ExtendedField c(4, 3.0);
  CHECK(neumann_energy(c, g, well, 2.0) == doctest::Approx(4.0 * well.value(3.0)));
  // With reflected ghosts the two-sided energy gains half of each end slope.
  const ExtendedField r = with_ghosts(NodeField(4, std::vector<double>{0, 1, 0, 1, 0}), 1, 1);
  CHECK(neumann_energy(r, g, ZeroPotential{}, 2.0) == doctest::Approx(4.0));
  CHECK(discrete_energy(interior(r), g, ZeroPotential{}, 2.0) == doctest::Approx(4.0));
}

TEST_CASE("two-sided bulk dissipation") {
  const Grid g(2.0, 2);
  CHECK(neumann_bulk_dissipation(ExtendedField(2, 7.0), g) == 0);
  ExtendedField p(2);
  for (int k = -1; k <= 3; ++k) p[k] = g.x(k);
  CHECK(neumann_bulk_dissipation(p, g) == doctest::Approx(2.0));
}

TEST_CASE("a priori bound") {
  const Grid g(2.0, 8);
  const auto zero = stability_bound(NodeField(8, 0.0), g, well, 1.0);
  CHECK(zero.B0 == doctest::Approx(std::sqrt(2.0 * 2.0 * 0.25)));
  CHECK(zero.B0_tilde == doctest::Approx(std::sqrt(2.0) * zero.B0));

  std::mt19937_64 rng(17);
  const auto u = oracle::random_field<0>(8, rng, 0.5);
  const auto b1 = stability_bound(u, g, well, 1.0);
  CHECK(b1.B0 >= 0);
  CHECK(b1.B0_tilde >= std::abs(discrete_mass(u, g)) / g.length());
  CHECK(std::sqrt(g.length()) * b1.B0 >= linf_norm(u) - std::abs(discrete_mass(u, g)) / g.length() - 1e-12);

  const auto b_zero_pot = stability_bound(u, g, ZeroPotential{}, 1.0);
  const auto b_zero_pot2 = stability_bound(u, g, ZeroPotential{}, 2.0);
  CHECK(b_zero_pot2.B0 == doctest::Approx(b_zero_pot.B0));
  CHECK_THROWS_AS(stability_bound(u, g, well, 0.0), std::invalid_argument);
}

TEST_CASE("refined bound") {
  const Grid g(1.0, 50);
  const auto z = refined_bound(FourierSeries{}, g, well, 1.0);
  CHECK(z.J_u0 == doctest::Approx(0.0));
  CHECK(z.M_u0 == doctest::Approx(0.0));
  CHECK(std::isfinite(z.value));
  CHECK(z.value == doctest::Approx(z.value_check).epsilon(1e-6));

  const FourierSeries c({FourierTerm{WaveKind::cosine, 0.4, 0.0, 0.0}});
  const auto rc = refined_bound(c, Grid(3.0, 30), well, 1.0);
  CHECK(rc.M_u0 == doctest::Approx(1.2));
  CHECK(rc.J_u0 == doctest::Approx(3.0 * well.value(0.4)));

  const auto ex3 = FourierSeries::builtin("example3");
  const auto coarse = refined_bound(ex3, Grid(1.0, 50), well, 0.001);
  const auto fine = refined_bound(ex3, Grid(1.0, 100), well, 0.001);
  CHECK(coarse.value == doctest::Approx(fine.value).epsilon(1e-6));
  CHECK(coarse.value == doctest::Approx(coarse.value_check).epsilon(1e-6));
}

TEST_CASE("time-step condition") {
  const double gamma = 0.9;
  BoundPack tiny;
  tiny.B0 = 0.0;
  tiny.B0_tilde = 0.0;
  const double limit = 8.0 * gamma / 9.0;
  CHECK(timestep_condition(tiny, well, gamma, 0.99 * limit, 1.0).tcon_satisfied);
  CHECK_FALSE(timestep_condition(tiny, well, gamma, 1.01 * limit, 1.0).tcon_satisfied);
  CHECK(timestep_condition(tiny, well, gamma, limit, 1.0).tcon_margin == doctest::Approx(1.0));

  BoundPack big;
  big.B0 = 5.0;
  big.B0_tilde = 10.0;
  const auto a = timestep_condition(big, well, gamma, 1e-3, 1.0);
  const auto b = timestep_condition(big, well, gamma, 4e-3, 1.0);
  CHECK(b.tcon_margin == doctest::Approx(2.0 * a.tcon_margin));
  CHECK(b.corollary_margin == doctest::Approx(2.0 * a.corollary_margin));
}

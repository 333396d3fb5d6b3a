#include <chdbc/banded.hpp>

#include <random>

#include "doctest.h"
#include "identities.hpp"

using namespace chdbc;

namespace {

double max_abs_diff(const oracle::Matrix& a, const oracle::Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

double max_abs(const oracle::Matrix& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("coefficients") {
  const Grid g(1.0, 10);
  const auto c = StepCoefficients::from(g, 0.01, 2.0, 5.0);
  CHECK(c.alpha == doctest::Approx(0.01 / (4 * 5.0 * 0.1)));
  CHECK(c.beta == doctest::Approx(2.0 * 0.01 / (2 * 1e-4)));
}

TEST_CASE("band storage") {
  BandedMatrix m(6);
  m.set(3, 5, 2.0);
  m.set(3, 1, -1.0);
  CHECK(m.get(3, 5) == 2);
  CHECK(m.get(0, 5) == 0);
  CHECK_THROWS_AS(m.set(0, 3, 1.0), std::out_of_range);
  CHECK_THROWS_AS(m.get(6, 0), std::out_of_range);
  const auto y = m.multiply(std::vector<double>{1, 1, 1, 1, 1, 1});
  CHECK(y[3] == 1);
  CHECK(y[0] == 0);
}

TEST_CASE("interior stencil and end rows") {
  const StepCoefficients c{0.5, 2.0};
  const auto a = assemble(8, c, BoundaryKind::dynamic);
  CHECK(a.get(4, 2) == doctest::Approx(2.0));
  CHECK(a.get(4, 3) == doctest::Approx(-8.0));
  CHECK(a.get(4, 4) == doctest::Approx(13.0));
  CHECK(a.get(4, 5) == doctest::Approx(-8.0));
  CHECK(a.get(4, 6) == doctest::Approx(2.0));
  CHECK(a.get(0, 0) == doctest::Approx(1 + 2.0 * (6 + 2 / 0.5)));

  const auto n = assemble(8, c, BoundaryKind::neumann);
  const auto d = n.multiply(std::vector<double>(9, 1.0));
  for (double v : d) CHECK(v == doctest::Approx(1.0));

  const auto o = assemble(8, c, BoundaryKind::dynamic_onesided);
  CHECK(o.get(0, 0) == doctest::Approx(1 + 2 * 0.5));
  CHECK(o.get(0, 1) == doctest::Approx(-2 * 0.5));
  CHECK(o.get(1, 0) == doctest::Approx(-2.0));
  CHECK(o.get(1, 1) == doctest::Approx(1 + 3 * 2.0));
  CHECK(o.get(1, 2) == doctest::Approx(-3 * 2.0));
  CHECK(o.get(1, 3) == doctest::Approx(2.0));
  CHECK(o.get(8, 7) == o.get(0, 1));
  CHECK(o.get(7, 5) == o.get(1, 3));
}

TEST_CASE("action on the constant vector") {
  const double alpha = 0.3;
  const double beta = 7.0;
  for (int cells : {4, 5, 12}) {
    const std::vector<double> ones(static_cast<std::size_t>(cells + 1), 1.0);
    for (auto kind : {BoundaryKind::neumann, BoundaryKind::dynamic_onesided}) {
      for (double v : assemble(cells, {alpha, beta}, kind).multiply(ones)) CHECK(v == doctest::Approx(1.0));
    }
    const auto a = assemble(cells, {alpha, beta}, BoundaryKind::dynamic);
    const auto y = a.multiply(ones);
    std::vector<double> expect(ones);
    expect[0] += beta * 2.0 / alpha;
    expect[1] -= beta / alpha;
    expect[static_cast<std::size_t>(cells - 1)] -= beta / alpha;
    expect[static_cast<std::size_t>(cells)] += beta * 2.0 / alpha;
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    const auto x = BandedLU(a).solve(y);
    for (double v : x) CHECK(std::abs(v - 1.0) <= 1e-10);
  }
}

TEST_CASE("assembled matrix equals the explicit product") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> logu(-3.0, 3.0);
  for (int cells = 4; cells <= 16; ++cells) {
    for (int t = 0; t < 5; ++t) {
      const double alpha = std::pow(10.0, logu(rng));
      const double beta = std::pow(10.0, logu(rng));
      for (bool dyn : {true, false}) {
        const auto a = assemble(cells, {alpha, beta}, dyn ? BoundaryKind::dynamic : BoundaryKind::neumann);
        const auto ref = oracle::step_matrix_product(cells, alpha, beta, dyn);
        CHECK(max_abs_diff(a.dense(), ref) <= 1e-12 * max_abs(ref));
      }
    }
  }
}

TEST_CASE("persymmetry") {
  for (auto kind : {BoundaryKind::dynamic, BoundaryKind::neumann, BoundaryKind::dynamic_onesided}) {
    const int K = 9;
    const auto a = assemble(K, {0.2, 3.0}, kind);
    for (int i = 0; i <= K; ++i)
      for (int j = 0; j <= K; ++j) CHECK(a.get(i, j) == a.get(K - i, K - j));
  }
}

TEST_CASE("LU solve matches dense elimination") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto kind : {BoundaryKind::dynamic, BoundaryKind::neumann, BoundaryKind::dynamic_onesided}) {
    for (int cells : {4, 7, 16, 40}) {
      const auto a = assemble(cells, {0.05, 250.0}, kind);
      std::vector<double> b(static_cast<std::size_t>(cells + 1));
      for (double& v : b) v = unit(rng);
      const BandedLU lu(a);
      const auto x = lu.solve(b);
      const auto ref = oracle::dense_solve(a.dense(), b);
      double err = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        err = std::max(err, std::abs(x[i] - ref[i]));
        scale = std::max(scale, std::abs(ref[i]));
      }
      CHECK(err <= 1e-10 * (1.0 + scale));
      const auto back = a.multiply(x);
      for (std::size_t i = 0; i < b.size(); ++i) CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("nonsingular over a parameter sweep") {
  for (int cells : {4, 5, 10, 50, 200}) {
    for (double alpha : {1e-6, 1e-3, 1.0, 1e3}) {
      for (double beta : {0.0, 1e-3, 1.0, 1e4, 1e8}) {
        for (auto kind : {BoundaryKind::dynamic, BoundaryKind::neumann, BoundaryKind::dynamic_onesided}) {
          CHECK_NOTHROW(BandedLU(assemble(cells, {alpha, beta}, kind)));
        }
      }
    }
  }
}

TEST_CASE("vanishing beta gives the identity") {
  const auto a = assemble(6, {0.7, 0.0}, BoundaryKind::dynamic);
  const BandedLU lu(a);
  for (double p : lu.pivots()) CHECK(p == 1.0);
  const std::vector<double> b{1, 2, 3, 4, 5, 6, 7};
  CHECK(lu.solve(b) == b);
}

TEST_CASE("rejects small or singular systems") {
  CHECK_THROWS_AS(assemble(3, {1.0, 1.0}, BoundaryKind::dynamic), std::invalid_argument);
  CHECK_THROWS_AS(BandedLU(BandedMatrix(5)), SingularSystem);
  const BandedLU lu(assemble(4, {1.0, 1.0}, BoundaryKind::neumann));
  CHECK_THROWS(lu.solve(std::vector<double>{1, 2, 3}));
}

TEST_CASE("boundary quadratic form") {
  const std::vector<double> zero(9, 0.0);
  CHECK(quadratic_form_check(8, 0.3, zero) == std::pair<double, double>{0.0, 0.0});
  std::vector<double> e1(9, 0.0);
  e1[0] = 1.0;
  const auto [direct, squares] = quadratic_form_check(8, 0.25, e1);
  CHECK(direct == doctest::Approx(6.0));
  CHECK(squares == doctest::Approx(6.0));
  std::mt19937_64 rng(13);
  for (int cells : {4, 16, 33}) {
    for (int t = 0; t < 100; ++t) {
      const double alpha = std::pow(10.0, std::uniform_real_distribution<double>(-3, 2)(rng));
      std::vector<double> x(static_cast<std::size_t>(cells + 1));
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      for (double& v : x) v = unit(rng);
      CHECK(identity::quadratic_form(cells, alpha, x).holds(1e-12));
      CHECK(quadratic_form_check(cells, alpha, x).first >= -1e-12);
    }
  }
}

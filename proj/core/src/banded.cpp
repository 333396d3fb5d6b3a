#include "chdbc/banded.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chdbc {

StepCoefficients StepCoefficients::from(const Grid& grid, double dt, double gamma, double eps_ex) {
  if (!(dt > 0.0) || !(gamma > 0.0) || !(eps_ex > 0.0)) {
    throw std::invalid_argument("dt, gamma and eps_ex must be positive");
  }
  const double dx = grid.dx();
  return {dt / (4.0 * eps_ex * dx), gamma * dt / (2.0 * dx * dx * dx * dx)};
}

BandedMatrix::BandedMatrix(int order) : n_(order), rows_(static_cast<std::size_t>(order)) {
  if (order < 1) throw std::invalid_argument("matrix order must be positive");
  for (auto& r : rows_) r.fill(0.0);
}

double BandedMatrix::get(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::out_of_range("matrix index (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  if (std::abs(i - j) > kHalfwidth) return 0.0;
  return rows_[static_cast<std::size_t>(i)][j - i + kHalfwidth];
}

void BandedMatrix::set(int i, int j, double v) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || std::abs(i - j) > kHalfwidth) {
    throw std::out_of_range("band index (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  rows_[static_cast<std::size_t>(i)][j - i + kHalfwidth] = v;
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("vector length mismatch");
  std::vector<double> y(x.size(), 0.0);
  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, i - kHalfwidth);
    const int hi = std::min(n_ - 1, i + kHalfwidth);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += rows_[static_cast<std::size_t>(i)][j - i + kHalfwidth] * x[j];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

std::vector<std::vector<double>> BandedMatrix::dense() const {
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n_),
                                     std::vector<double>(static_cast<std::size_t>(n_), 0.0));
  for (int i = 0; i < n_; ++i) {
    for (int j = std::max(0, i - kHalfwidth); j <= std::min(n_ - 1, i + kHalfwidth); ++j) {
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = get(i, j);
    }
  }
  return d;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.order()),
      upper_(static_cast<std::size_t>(n_)),
      multipliers_(static_cast<std::size_t>(n_)),
      swaps_(static_cast<std::size_t>(n_)) {
  for (int i = 0; i < n_; ++i) {
    upper_[static_cast<std::size_t>(i)].fill(0.0);
    multipliers_[static_cast<std::size_t>(i)].fill(0.0);
    for (int j = std::max(0, i - kLower); j <= std::min(n_ - 1, i + kLower); ++j) u(i, j) = a.get(i, j);
  }

  for (int k = 0; k < n_; ++k) {
    const int last_row = std::min(n_ - 1, k + kLower);
    const int last_col = std::min(n_ - 1, k + kUpper);

    int p = k;
    for (int i = k + 1; i <= last_row; ++i) {
      if (std::abs(u(i, k)) > std::abs(u(p, k))) p = i;
    }
    swaps_[static_cast<std::size_t>(k)] = p;
    if (p != k) {
      for (int j = k; j <= last_col; ++j) std::swap(u(k, j), u(p, j));
    }

    const double pivot = u(k, k);
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw SingularSystem("zero or non-finite pivot at row " + std::to_string(k));
    }
    for (int i = k + 1; i <= last_row; ++i) {
      const double m = u(i, k) / pivot;
      multipliers_[static_cast<std::size_t>(k)][i - k - 1] = m;
      u(i, k) = 0.0;
      for (int j = k + 1; j <= last_col; ++j) u(i, j) -= m * u(k, j);
    }
  }
}

std::vector<double> BandedLU::pivots() const {
  std::vector<double> d(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = u(i, i);
  return d;
}

std::vector<double> BandedLU::solve(std::span<const double> rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("rhs length mismatch");
  std::vector<double> b(rhs.begin(), rhs.end());
  for (int k = 0; k < n_; ++k) {
    std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(swaps_[static_cast<std::size_t>(k)])]);
    for (int i = k + 1; i <= std::min(n_ - 1, k + kLower); ++i) {
      b[static_cast<std::size_t>(i)] -= multipliers_[static_cast<std::size_t>(k)][i - k - 1] * b[static_cast<std::size_t>(k)];
    }
  }
  for (int k = n_ - 1; k >= 0; --k) {
    double s = b[static_cast<std::size_t>(k)];
    for (int j = k + 1; j <= std::min(n_ - 1, k + kUpper); ++j) s -= u(k, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(k)] = s / u(k, k);
  }
  return b;
}

NodeField BandedLU::solve(const NodeField& rhs) const {
  return NodeField(rhs.cells(), solve(rhs.nodes()));
}

namespace {

void set_row(BandedMatrix& a, int i, int first_col, std::initializer_list<double> entries) {
  int j = first_col;
  for (double v : entries) a.set(i, j++, v);
}

// Writes the mirror image of rows 0 and 1 into rows K and K-1.
void mirror_boundary_rows(BandedMatrix& a, int cells) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j <= i + BandedMatrix::kHalfwidth; ++j) a.set(cells - i, cells - j, a.get(i, j));
  }
}

}  // namespace

BandedMatrix assemble(int cells, const StepCoefficients& coeffs, BoundaryKind kind) {
  if (cells < 4) throw std::invalid_argument("assemble needs K >= 4");
  const double a = coeffs.alpha;
  const double b = coeffs.beta;
  if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("beta must be finite and >= 0");
  if (kind != BoundaryKind::neumann && (!(a > 0.0) || !std::isfinite(a))) {
    throw std::invalid_argument("alpha must be finite and positive");
  }

  BandedMatrix m(cells + 1);
  for (int k = 2; k <= cells - 2; ++k) {
    set_row(m, k, k - 2, {b, -4.0 * b, 1.0 + 6.0 * b, -4.0 * b, b});
  }
  switch (kind) {
    case BoundaryKind::dynamic:
      set_row(m, 0, 0, {1.0 + b * (6.0 + 2.0 / a), -8.0 * b, 2.0 * b});
      set_row(m, 1, 0, {-b * (4.0 + 1.0 / a), 1.0 + 7.0 * b, -4.0 * b, b});
      break;
    case BoundaryKind::neumann:
      set_row(m, 0, 0, {1.0 + 6.0 * b, -8.0 * b, 2.0 * b});
      set_row(m, 1, 0, {-4.0 * b, 1.0 + 7.0 * b, -4.0 * b, b});
      break;
    case BoundaryKind::dynamic_onesided:
      set_row(m, 0, 0, {1.0 + 2.0 * a, -2.0 * a});
      set_row(m, 1, 0, {-b, 1.0 + 3.0 * b, -3.0 * b, b});
      break;
  }
  mirror_boundary_rows(m, cells);
  return m;
}

std::pair<double, double> quadratic_form_check(int cells, double alpha, std::span<const double> x) {
  if (cells < 2) throw std::invalid_argument("quadratic form needs K >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const auto n = static_cast<std::size_t>(cells + 1);
  if (x.size() != n) throw std::invalid_argument("vector must have K+1 entries");

  const double root2 = std::numbers::sqrt2;
  double direct = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool end = i == 0 || i + 1 == n;
    direct += (end ? 2.0 + 1.0 / alpha : 2.0) * x[i] * x[i];
    if (i + 1 < n) {
      const bool end_pair = i == 0 || i + 2 == n;
      direct += 2.0 * (end_pair ? -root2 : -1.0) * x[i] * x[i + 1];
    }
  }

  const double first = x[0] - x[1] / root2;
  const double last = x[n - 1] - x[n - 2] / root2;
  double squares = x[0] * x[0] / alpha + 2.0 * first * first + 2.0 * last * last +
                   x[n - 1] * x[n - 1] / alpha;
  for (std::size_t i = 1; i + 2 < n; ++i) {
    const double d = x[i] - x[i + 1];
    squares += d * d;
  }
  return {direct, squares};
}

}  // namespace chdbc

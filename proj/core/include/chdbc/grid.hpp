#pragma once

// Uniform 1-D grids, node fields with optional ghost layers, difference
// operators, trapezoidal summation and discrete norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chdbc {

/// Uniform grid on [0, L] with K cells and K+1 nodes x_k = k*dx.
class Grid {
 public:
  Grid(double length, int cells);

  double length() const { return length_; }
  int cells() const { return cells_; }
  int nodes() const { return cells_ + 1; }
  double dx() const { return dx_; }
  double x(int k) const { return static_cast<double>(k) * dx_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double length_;
  int cells_;
  double dx_;
};

/// Real values on grid nodes k = -Ghosts .. K+Ghosts.
///
/// operator[] is unchecked and meant for inner loops; at() throws
/// std::out_of_range for any index outside the stored range.
template <int Ghosts>
class BasicField {
  static_assert(Ghosts == 0 || Ghosts == 1);

 public:
  BasicField() = default;

  explicit BasicField(int cells, double fill = 0.0)
      : cells_(cells), values_(static_cast<std::size_t>(cells + 1 + 2 * Ghosts), fill) {
    if (cells < 1) throw std::invalid_argument("field needs at least one cell");
  }

  /// Takes values for k = -Ghosts .. K+Ghosts in order; all must be finite.
  BasicField(int cells, std::vector<double> values) : cells_(cells), values_(std::move(values)) {
    if (cells < 1) throw std::invalid_argument("field needs at least one cell");
    if (values_.size() != static_cast<std::size_t>(cells + 1 + 2 * Ghosts)) {
      throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                  " does not match K+1+2*ghosts = " +
                                  std::to_string(cells + 1 + 2 * Ghosts));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("field entries must be finite");
    }
  }

  static constexpr int ghosts() { return Ghosts; }
  int cells() const { return cells_; }
  int first() const { return -Ghosts; }
  int last() const { return cells_ + Ghosts; }

  double operator[](int k) const { return values_[static_cast<std::size_t>(k + Ghosts)]; }
  double& operator[](int k) { return values_[static_cast<std::size_t>(k + Ghosts)]; }

  double at(int k) const {
    if (k < first() || k > last()) {
      throw std::out_of_range("field index " + std::to_string(k) + " outside [" +
                              std::to_string(first()) + ", " + std::to_string(last()) + "]");
    }
    return (*this)[k];
  }

  /// Every stored value, ghosts included.
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Nodes 0..K only.
  std::span<const double> nodes() const {
    return std::span<const double>(values_).subspan(Ghosts, static_cast<std::size_t>(cells_ + 1));
  }
  std::span<double> nodes() {
    return std::span<double>(values_).subspan(Ghosts, static_cast<std::size_t>(cells_ + 1));
  }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const BasicField&, const BasicField&) = default;

 private:
  int cells_ = 0;
  std::vector<double> values_;
};

using NodeField = BasicField<0>;
using ExtendedField = BasicField<1>;

ExtendedField with_ghosts(const NodeField& f, double left_ghost, double right_ghost);
NodeField interior(const ExtendedField& f);

namespace detail {
template <int G>
void require_matching(const BasicField<G>& f, const Grid& grid) {
  if (f.cells() != grid.cells()) {
    throw std::invalid_argument("field has " + std::to_string(f.cells()) + " cells, grid has " +
                                std::to_string(grid.cells()));
  }
}
}  // namespace detail

template <int G>
double diff_forward(const BasicField<G>& f, const Grid& grid, int k) {
  detail::require_matching(f, grid);
  return (f.at(k + 1) - f.at(k)) / grid.dx();
}

template <int G>
double diff_backward(const BasicField<G>& f, const Grid& grid, int k) {
  detail::require_matching(f, grid);
  return (f.at(k) - f.at(k - 1)) / grid.dx();
}

template <int G>
double diff_central(const BasicField<G>& f, const Grid& grid, int k) {
  detail::require_matching(f, grid);
  return (f.at(k + 1) - f.at(k - 1)) / (2.0 * grid.dx());
}

template <int G>
double diff_second(const BasicField<G>& f, const Grid& grid, int k) {
  detail::require_matching(f, grid);
  const double dx = grid.dx();
  return (f.at(k + 1) - 2.0 * f.at(k) + f.at(k - 1)) / (dx * dx);
}

/// (f_0/2 + f_1 + ... + f_{K-1} + f_K/2) * dx over the nodes of any field.
double trap_sum(std::span<const double> nodes, double dx);

template <int G>
double trap_sum(const BasicField<G>& f, const Grid& grid) {
  detail::require_matching(f, grid);
  return trap_sum(f.nodes(), grid.dx());
}

/// Squared discrete Dirichlet seminorm sum_{k<K} (delta+ f_k)^2 dx.
double dirichlet_seminorm_sq(std::span<const double> nodes, double dx);

template <int G>
double dirichlet_seminorm(const BasicField<G>& f, const Grid& grid) {
  detail::require_matching(f, grid);
  return std::sqrt(dirichlet_seminorm_sq(f.nodes(), grid.dx()));
}

double linf_norm(std::span<const double> nodes);

template <int G>
double linf_norm(const BasicField<G>& f) {
  return linf_norm(f.nodes());
}

}  // namespace chdbc

#pragma once

// Pentadiagonal per-step system A U~ = f and its banded LU factorization.

#include <array>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chdbc/grid.hpp"

namespace chdbc {

enum class BoundaryKind { dynamic, neumann, dynamic_onesided };

struct StepCoefficients {
  double alpha = 0.0;  // dt / (4 eps_ex dx)
  double beta = 0.0;   // gamma dt / (2 dx^4)

  static StepCoefficients from(const Grid& grid, double dt, double gamma, double eps_ex);
};

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square matrix with lower and upper bandwidth 2.
class BandedMatrix {
 public:
  static constexpr int kHalfwidth = 2;

  BandedMatrix() = default;
  explicit BandedMatrix(int order);

  int order() const { return n_; }

  /// Zero outside the band; throws std::out_of_range for indices outside the matrix.
  double get(int i, int j) const;
  /// Throws std::out_of_range when (i, j) lies outside the band.
  void set(int i, int j, double v);

  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<std::vector<double>> dense() const;

 private:
  int n_ = 0;
  std::vector<std::array<double, 2 * kHalfwidth + 1>> rows_;
};

/// LU with partial pivoting; fill-in is confined to upper bandwidth 4.
class BandedLU {
 public:
  /// Throws SingularSystem on a zero or non-finite pivot.
  explicit BandedLU(const BandedMatrix& a);

  int order() const { return n_; }

  /// Diagonal of U after pivoting.
  std::vector<double> pivots() const;

  std::vector<double> solve(std::span<const double> rhs) const;
  NodeField solve(const NodeField& rhs) const;

 private:
  static constexpr int kLower = BandedMatrix::kHalfwidth;
  static constexpr int kUpper = 2 * BandedMatrix::kHalfwidth;
  static constexpr int kWidth = kLower + kUpper + 1;

  double& u(int i, int j) { return upper_[static_cast<std::size_t>(i)][j - i + kLower]; }
  double u(int i, int j) const { return upper_[static_cast<std::size_t>(i)][j - i + kLower]; }

  int n_;
  std::vector<std::array<double, kWidth>> upper_;
  std::vector<std::array<double, kLower>> multipliers_;
  std::vector<int> swaps_;
};

/// Matrix of the eliminated step system on K+1 unknowns; requires K >= 4.
/// beta = 0 yields the identity.
BandedMatrix assemble(int cells, const StepCoefficients& coeffs, BoundaryKind kind);

/// x^T (-Y) x for x of length K+1, directly and via the completed squares.
std::pair<double, double> quadratic_form_check(int cells, double alpha,
                                               std::span<const double> x);

}  // namespace chdbc

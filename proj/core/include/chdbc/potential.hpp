#pragma once

// Bulk potentials F, their divided differences dF/d(xi, eta) and the
// four-point quantity Fbar''(xi, xi~; eta, eta~).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>

namespace chdbc {

/// Anything that can be evaluated with derivatives up to order four and
/// has a finite infimum.
template <class P>
concept SmoothPotential = requires(const P& p, double s) {
  { p.value(s) } -> std::convertible_to<double>;
  { p.d1(s) } -> std::convertible_to<double>;
  { p.d2(s) } -> std::convertible_to<double>;
  { p.d3(s) } -> std::convertible_to<double>;
  { p.d4(s) } -> std::convertible_to<double>;
  { p.infimum() } -> std::convertible_to<double>;
};

/// Potentials that supply cancellation-free closed forms for the divided
/// differences. Those are used instead of the generic two-branch formulas.
template <class P>
concept ExactDividedDifferences = SmoothPotential<P> && requires(const P& p, double a) {
  { p.exact_quotient(a, a) } -> std::convertible_to<double>;
  { p.exact_fbar_second(a, a, a, a) } -> std::convertible_to<double>;
};

/// F(s) = (q/4) s^4 - (r/2) s^2 with q, r > 0.
class DoubleWell {
 public:
  DoubleWell() = default;
  DoubleWell(double q, double r) : q_(q), r_(r) {
    if (!(q > 0.0) || !(r > 0.0) || !std::isfinite(q) || !std::isfinite(r)) {
      throw std::invalid_argument("double-well coefficients q and r must be positive");
    }
  }

  double q() const { return q_; }
  double r() const { return r_; }

  double value(double s) const {
    const double s2 = s * s;
    return 0.25 * q_ * s2 * s2 - 0.5 * r_ * s2;
  }
  double d1(double s) const { return q_ * s * s * s - r_ * s; }
  double d2(double s) const { return 3.0 * q_ * s * s - r_; }
  double d3(double s) const { return 6.0 * q_ * s; }
  double d4(double) const { return 6.0 * q_; }

  double infimum() const { return -r_ * r_ / (4.0 * q_); }

  // Exact for every pair, including xi == eta.
  double exact_quotient(double xi, double eta) const {
    const double cubic = xi * xi * xi + xi * xi * eta + xi * eta * eta + eta * eta * eta;
    return 0.25 * q_ * cubic - 0.5 * r_ * (xi + eta);
  }

  double exact_fbar_second(double xi, double xit, double eta, double etat) const {
    const double quad = 2.0 * (xi * xi + xi * xit + xit * xit) + (eta + etat) * (xi + xit) +
                        eta * eta + etat * etat;
    return 0.25 * q_ * quad - r_;
  }

  /// max |F^(order)(s)| over |s| <= radius, order in {2, 3, 4}.
  double max_abs_derivative(int order, double radius) const {
    const double m = std::abs(radius);
    switch (order) {
      case 2: return std::max(3.0 * q_ * m * m - r_, r_);
      case 3: return 6.0 * q_ * m;
      case 4: return 6.0 * q_;
      default: throw std::invalid_argument("max_abs_derivative supports orders 2, 3, 4");
    }
  }

  friend bool operator==(const DoubleWell&, const DoubleWell&) = default;

 private:
  double q_ = 1.0;
  double r_ = 1.0;
};

/// Relative threshold below which two arguments count as coincident.
inline constexpr double kCoincidenceTolerance = 1e-8;

namespace detail {

inline bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * (1.0 + std::abs(a) + std::abs(b));
}

// d/dxi of dF/d(xi, eta) for a generic potential.
template <SmoothPotential P>
double quotient_slope(const P& pot, double xi, double eta) {
  const double h = xi - eta;
  // Taylor branch about eta; exact for quartics, O(h^3) otherwise.
  if (nearly_equal(xi, eta, 1e-4)) {
    return 0.5 * pot.d2(eta) + pot.d3(eta) * h / 3.0 + pot.d4(eta) * h * h / 8.0;
  }
  return (pot.d1(xi) * h - (pot.value(xi) - pot.value(eta))) / (h * h);
}

}  // namespace detail

/// dF/d(xi, eta): the secant slope, F'(eta) when the arguments coincide.
template <SmoothPotential P>
double difference_quotient(const P& pot, double xi, double eta) {
  if constexpr (ExactDividedDifferences<P>) {
    return pot.exact_quotient(xi, eta);
  } else {
    if (detail::nearly_equal(xi, eta, kCoincidenceTolerance)) {
      const double mid = 0.5 * (xi + eta);
      const double h = xi - eta;
      return pot.d1(mid) + pot.d3(mid) * h * h / 24.0;
    }
    return (pot.value(xi) - pot.value(eta)) / (xi - eta);
  }
}

/// Fbar''(xi, xit; eta, etat): divided difference in the first slot pair of
/// dF/d(., eta) + dF/d(., etat).
template <SmoothPotential P>
double fbar_second(const P& pot, double xi, double xit, double eta, double etat) {
  if constexpr (ExactDividedDifferences<P>) {
    return pot.exact_fbar_second(xi, xit, eta, etat);
  } else {
    if (detail::nearly_equal(xi, xit, kCoincidenceTolerance)) {
      const double mid = 0.5 * (xi + xit);
      return detail::quotient_slope(pot, mid, eta) + detail::quotient_slope(pot, mid, etat);
    }
    const double upper = difference_quotient(pot, xi, eta) + difference_quotient(pot, xi, etat);
    const double lower = difference_quotient(pot, xit, eta) + difference_quotient(pot, xit, etat);
    return (upper - lower) / (xi - xit);
  }
}

}  // namespace chdbc

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chdbc/grid.hpp"

namespace chdbc {

enum class WaveKind { sine, cosine };

/// amplitude * kind(mode * pi * x + phase)
struct FourierTerm {
  WaveKind kind = WaveKind::cosine;
  double amplitude = 0.0;
  double mode = 0.0;
  double phase = 0.0;
};

/// Finite Fourier sum with closed-form derivatives up to order three.
class FourierSeries {
 public:
  FourierSeries() = default;
  explicit FourierSeries(std::vector<FourierTerm> terms);

  /// example1, example2, example3; throws std::invalid_argument otherwise.
  static FourierSeries builtin(std::string_view name);

  /// Parses "kind:amplitude:mode[:phase]" terms joined by '+' or ','.
  static FourierSeries parse(std::string_view text);

  /// i-th derivative at x, i in 0..3.
  double derivative(int order, double x) const;
  double operator()(double x) const { return derivative(0, x); }

  const std::vector<FourierTerm>& terms() const { return terms_; }

 private:
  std::vector<FourierTerm> terms_;
};

/// Samples u0 at the nodes 0..K.
NodeField sample(const FourierSeries& u0, const Grid& grid);

/// Samples u0 at k = -1..K+1; the ghosts are the smooth continuation of u0.
ExtendedField sample_extended(const FourierSeries& u0, const Grid& grid);

NodeField builtin_ic(std::string_view name, const Grid& grid);

}  // namespace chdbc

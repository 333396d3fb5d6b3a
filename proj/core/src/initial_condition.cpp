#include "chdbc/initial_condition.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chdbc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw std::invalid_argument("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

FourierTerm parse_term(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    fields.push_back(trim(text.substr(start, colon - start)));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (fields.size() < 3 || fields.size() > 4) {
    throw std::invalid_argument("initial-condition term '" + std::string(trim(text)) +
                                "' must be kind:amplitude:mode[:phase]");
  }
  FourierTerm term;
  if (fields[0] == "sin") {
    term.kind = WaveKind::sine;
  } else if (fields[0] == "cos") {
    term.kind = WaveKind::cosine;
  } else {
    throw std::invalid_argument("unknown wave kind '" + std::string(fields[0]) + "'");
  }
  term.amplitude = parse_number(fields[1], "amplitude");
  term.mode = parse_number(fields[2], "mode");
  if (fields.size() == 4) term.phase = parse_number(fields[3], "phase");
  return term;
}

}  // namespace

FourierSeries::FourierSeries(std::vector<FourierTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.mode) || !std::isfinite(t.phase)) {
      throw std::invalid_argument("initial-condition terms must be finite");
    }
  }
}

FourierSeries FourierSeries::builtin(std::string_view name) {
  using enum WaveKind;
  if (name == "example1") return FourierSeries({{cosine, 0.01, 0.5, 0.0}});
  if (name == "example2") {
    return FourierSeries({{sine, 0.01, 2.0, 0.0},
                          {cosine, 0.001, 4.0, 0.0},
                          {sine, 0.006, 4.0, 0.0},
                          {cosine, 0.002, 10.0, 0.0}});
  }
  if (name == "example3") return FourierSeries({{sine, 0.05, 2.0, 0.0}});
  throw std::invalid_argument("unknown built-in initial condition '" + std::string(name) + "'");
}

FourierSeries FourierSeries::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty initial-condition specification");
  if (text.find(':') == std::string_view::npos) return builtin(text);
  std::vector<FourierTerm> terms;
  std::size_t start = 0;
  while (true) {
    const auto sep = text.find_first_of("+,", start);
    terms.push_back(parse_term(text.substr(start, sep - start)));
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
  return FourierSeries(std::move(terms));
}

double FourierSeries::derivative(int order, double x) const {
  if (order < 0 || order > 3) throw std::invalid_argument("derivative order must be 0..3");
  double s = 0.0;
  for (const auto& t : terms_) {
    const double w = t.mode * std::numbers::pi;
    const double arg = w * x + t.phase;
    // d^n/dx^n of sin is w^n sin(arg + n pi/2); likewise for cos.
    const double shifted = arg + order * std::numbers::pi / 2.0;
    const double wave = t.kind == WaveKind::sine ? std::sin(shifted) : std::cos(shifted);
    s += t.amplitude * std::pow(w, order) * wave;
  }
  return s;
}

NodeField sample(const FourierSeries& u0, const Grid& grid) {
  NodeField f(grid.cells());
  for (int k = 0; k <= grid.cells(); ++k) f[k] = u0(grid.x(k));
  return f;
}

ExtendedField sample_extended(const FourierSeries& u0, const Grid& grid) {
  ExtendedField f(grid.cells());
  for (int k = -1; k <= grid.cells() + 1; ++k) f[k] = u0(grid.x(k));
  return f;
}

NodeField builtin_ic(std::string_view name, const Grid& grid) {
  return sample(FourierSeries::builtin(name), grid);
}

}  // namespace chdbc

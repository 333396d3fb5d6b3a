#include "chdbc/grid.hpp"

namespace chdbc {

Grid::Grid(double length, int cells) : length_(length), cells_(cells), dx_(0.0) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }
  if (cells < 2) throw std::invalid_argument("grid needs K >= 2 cells");
  dx_ = length / static_cast<double>(cells);
}

ExtendedField with_ghosts(const NodeField& f, double left_ghost, double right_ghost) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(f.cells() + 3));
  v.push_back(left_ghost);
  v.insert(v.end(), f.values().begin(), f.values().end());
  v.push_back(right_ghost);
  return ExtendedField(f.cells(), std::move(v));
}

NodeField interior(const ExtendedField& f) {
  auto n = f.nodes();
  return NodeField(f.cells(), std::vector<double>(n.begin(), n.end()));
}

double trap_sum(std::span<const double> nodes, double dx) {
  if (nodes.size() < 2) throw std::invalid_argument("trap_sum needs at least two nodes");
  double s = 0.5 * (nodes.front() + nodes.back());
  for (std::size_t k = 1; k + 1 < nodes.size(); ++k) s += nodes[k];
  return s * dx;
}

double dirichlet_seminorm_sq(std::span<const double> nodes, double dx) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double d = (nodes[k + 1] - nodes[k]) / dx;
    s += d * d;
  }
  return s * dx;
}

double linf_norm(std::span<const double> nodes) {
  double m = 0.0;
  for (double v : nodes) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace chdbc

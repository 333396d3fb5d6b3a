#include "chdbc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace chdbc {

SchemeParams RunConfig::scheme_params() const {
  SchemeParams p;
  p.grid = Grid(L, K);
  p.dt = dt;
  p.gamma = gamma;
  p.eps_ex = eps_ex;
  p.pot = DoubleWell(q, r);
  p.scheme = scheme;
  p.fp_tol = fp_tol;
  p.fp_maxiter = fp_maxiter;
  return p;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

template <class T>
T parse_value(const std::string& key, const Entry& e) {
  T v{};
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("malformed value '" + e.value + "' for " + key, e.line);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw ConfigError(key + " must be finite", e.line);
  }
  return v;
}

const std::set<std::string, std::less<>> kKnownKeys = {
    "name",   "scheme",   "L",      "K",          "dt",              "steps",
    "gamma",  "eps_ex",   "q",      "r",          "ic",              "fp_tol",
    "fp_maxiter", "snapshot_stride", "output_dir", "final_time", "reference_factor"};

const char* const kRequired[] = {"L", "K", "dt", "steps", "gamma", "ic"};

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown key '" + key + "'", line_no);
    if (value.empty()) throw ConfigError("empty value for " + key, line_no);
    if (entries.contains(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    entries.emplace(key, Entry{value, line_no});
  }
  for (const char* key : kRequired) {
    if (!entries.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'", 0);
  }

  RunConfig c;
  auto positive = [&](const char* key, double& out) {
    const auto it = entries.find(key);
    if (it == entries.end()) return;
    out = parse_value<double>(key, it->second);
    if (!(out > 0.0)) throw ConfigError(std::string(key) + " must be positive", it->second.line);
  };
  positive("L", c.L);
  positive("dt", c.dt);
  positive("gamma", c.gamma);
  positive("eps_ex", c.eps_ex);
  positive("q", c.q);
  positive("r", c.r);
  positive("fp_tol", c.fp_tol);
  positive("final_time", c.final_time);

  const auto& k_entry = entries.at("K");
  c.K = parse_value<int>("K", k_entry);
  if (c.K < 4) throw ConfigError("K must be at least 4", k_entry.line);

  const auto& steps_entry = entries.at("steps");
  c.steps = parse_value<long>("steps", steps_entry);
  if (c.steps < 0) throw ConfigError("steps must be non-negative", steps_entry.line);

  if (const auto it = entries.find("fp_maxiter"); it != entries.end()) {
    c.fp_maxiter = parse_value<int>("fp_maxiter", it->second);
    if (c.fp_maxiter < 1) throw ConfigError("fp_maxiter must be at least 1", it->second.line);
  }
  if (const auto it = entries.find("reference_factor"); it != entries.end()) {
    c.reference_factor = parse_value<int>("reference_factor", it->second);
    if (c.reference_factor < 1 || (c.reference_factor & (c.reference_factor - 1)) != 0) {
      throw ConfigError("reference_factor must be a power of two", it->second.line);
    }
  }
  if (const auto it = entries.find("snapshot_stride"); it != entries.end()) {
    c.snapshot_stride = parse_value<long>("snapshot_stride", it->second);
    if (c.snapshot_stride < 1) throw ConfigError("snapshot_stride must be positive", it->second.line);
  } else {
    c.snapshot_stride = std::max(1L, (c.steps + 99) / 100);
  }
  if (c.final_time == 0.0) c.final_time = c.dt * static_cast<double>(c.steps);

  if (const auto it = entries.find("scheme"); it != entries.end()) {
    const auto s = parse_scheme(it->second.value);
    if (!s) throw ConfigError("unknown scheme '" + it->second.value + "'", it->second.line);
    c.scheme = *s;
  }
  if (const auto it = entries.find("name"); it != entries.end()) c.name = it->second.value;
  if (const auto it = entries.find("output_dir"); it != entries.end()) c.output_dir = it->second.value;

  const auto& ic_entry = entries.at("ic");
  c.ic_text = ic_entry.value;
  try {
    c.ic = FourierSeries::parse(c.ic_text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), ic_entry.line);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace chdbc

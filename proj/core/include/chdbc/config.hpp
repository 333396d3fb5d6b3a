#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chdbc/initial_condition.hpp"
#include "chdbc/stepper.hpp"

namespace chdbc {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Flat key = value run description.
struct RunConfig {
  std::string name = "run";
  Scheme scheme = Scheme::dynamic_central;
  double L = 0.0;
  int K = 0;
  double dt = 0.0;
  long steps = 0;
  double gamma = 0.0;
  double eps_ex = 1.0;
  double q = 1.0;
  double r = 1.0;
  std::string ic_text;
  FourierSeries ic;
  double fp_tol = 1e-13;
  int fp_maxiter = 200;
  long snapshot_stride = 0;
  std::filesystem::path output_dir = ".";
  // Refinement studies: final time (default dt * steps) and reference factor.
  double final_time = 0.0;
  int reference_factor = 8;

  SchemeParams scheme_params() const;
};

/// Required keys: L, K, dt, steps, gamma, ic. Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace chdbc

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chdbc/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference Cahn-Hilliard solver with dynamic boundary conditions"};
  app.require_subcommand(1);

  std::string run_cfg;
  auto* run = app.add_subcommand("run", "simulate one configuration and write CSV traces");
  run->add_option("config", run_cfg, "configuration file")->required()->check(CLI::ExistingFile);

  std::string cond_cfg;
  auto* cond = app.add_subcommand("conditions", "report a priori bounds and time-step margins");
  cond->add_option("config", cond_cfg, "configuration file")->required()->check(CLI::ExistingFile);

  std::string conv_cfg;
  int levels = 3;
  auto* conv = app.add_subcommand("convergence", "grid refinement study");
  conv->add_option("config", conv_cfg, "configuration file")->required()->check(CLI::ExistingFile);
  conv->add_option("--levels", levels, "number of halvings of dx and dt")
      ->check(CLI::Range(1, 8));

  std::string cmp_a;
  std::string cmp_b;
  auto* cmp = app.add_subcommand("compare", "run two configurations side by side");
  cmp->add_option("config_a", cmp_a, "first configuration")->required()->check(CLI::ExistingFile);
  cmp->add_option("config_b", cmp_b, "second configuration")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  try {
    if (*run) return chdbc::run_command(chdbc::load_config(run_cfg), std::cout);
    if (*cond) return chdbc::conditions_command(chdbc::load_config(cond_cfg), std::cout);
    if (*conv) return chdbc::convergence_command(chdbc::load_config(conv_cfg), levels, std::cout);
    if (*cmp) {
      return chdbc::compare_command(chdbc::load_config(cmp_a), chdbc::load_config(cmp_b), std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "chdbc: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

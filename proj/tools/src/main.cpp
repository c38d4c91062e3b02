// koranyi: command-line front end for the numerical experiments on N_v.

#include <iostream>

#include "run.hpp"

int main(int argc, char** argv) {
  using namespace koranyi::cli;
  CLI::App app{"Numerical experiments on free two-step nilpotent groups with the Koranyi norm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KORANYI_VERSION);
  Registry reg;
  add_core_commands(app, reg);
  add_spherical_commands(app, reg);
  add_maximal_commands(app, reg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (const auto& cmd : reg) {
    if (!cmd.app->parsed()) continue;
    try {
      return execute(cmd);
    } catch (const koranyi::MarginError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::invalid_argument& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

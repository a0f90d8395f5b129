#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "cli_common.hpp"
#include "quicci/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"QUICCI binary local-shape descriptors: generation, Hamming-tree "
               "indexing, retrieval, and benchmark harnesses"};
  app.set_version_flag("--version", QUICCI_VERSION);
  app.set_config("--config", "", "key=value configuration file (command-line flags win)");
  app.require_subcommand(1);

  quicci::cli::register_generate(app);
  quicci::cli::register_index(app);
  quicci::cli::register_experiment(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

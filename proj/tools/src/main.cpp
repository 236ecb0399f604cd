#include "magbm_cli/commands.hpp"

#include <CLI11.hpp>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"magbm: magnetic continuum model of twisted bilayer graphene"};
  app.set_version_flag("--version", std::string(MAGBM_VERSION));
  app.require_subcommand(1);

  std::string config, out, format;
  int threads = 1;
  for (const auto& name : magbm::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration");
    sub->add_option("--out", out, "output file (overrides output.path)");
    sub->add_option("--format", format, "csv or json (overrides output.format)")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : magbm::cli::kConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::string message;
  const int rc = magbm::cli::execute(command, config, out, format, threads, message);
  if (rc != magbm::cli::kOk) std::cerr << "magbm " << command << ": " << message << "\n";
  return rc;
}

#include <CLI11.hpp>
#include <iostream>

#include "asymptopt/cli_run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"asymptopt: existence and stability diagnostics for vector optimization problems"};
  app.require_subcommand(1);

  std::string problem_path, config_path, out_dir = "out";
  const std::vector<std::string> names = {"check-existence", "asym", "solve",
                                          "psi",             "sharp", "stability", "all"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--problem", problem_path, "problem JSON file")->required();
    sub->add_option("--config", config_path, "run configuration JSON file");
    sub->add_option("--out", out_dir, "output directory");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    asymptopt::ProblemSpec spec = asymptopt::parse_problem(problem_path);
    asymptopt::RunConfig cfg = config_path.empty()
                                   ? asymptopt::default_config(spec.n)
                                   : asymptopt::parse_config(config_path, spec.n);
    return asymptopt::run_command(command, spec, cfg, out_dir);
  } catch (const asymptopt::SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return asymptopt::kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return asymptopt::kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return asymptopt::kInputError;
  }
}

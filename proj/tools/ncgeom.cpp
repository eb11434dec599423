// ncgeom: batch runner for nc hyperbolic geometry experiments.
//
//   ncgeom run <config.json>
//   ncgeom validate <config.json>
//   ncgeom demo <experiment>
//
// Exit status: 0 success, 1 property violation, 2 invalid input,
// 3 numerical failure.

#include <CLI11.hpp>

#include <iostream>

#include "ncgeom.hpp"

namespace {

int execute(const ncgeom::ExperimentConfig& cfg, bool quiet) {
  const auto report = ncgeom::run_experiment(cfg);
  const auto files = ncgeom::write_report(cfg, report, ncgeom::utc_timestamp());
  if (!quiet) {
    std::cout << cfg.experiment << ": " << report.violations << " violation(s)\n";
    for (const auto& note : report.violation_notes) std::cout << "  " << note << "\n";
    for (const auto& p : files.paths) std::cout << "wrote " << p.string() << "\n";
  }
  return report.violations > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nc hyperbolic geometry experiment runner"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only set the exit status");

  std::string run_path, validate_path, demo_name;
  auto* run = app.add_subcommand("run", "Run an experiment config and write its reports");
  run->add_option("config", run_path, "Path to a JSON config")->required();
  auto* validate = app.add_subcommand("validate", "Parse and validate a config without running it");
  validate->add_option("config", validate_path, "Path to a JSON config")->required();
  auto* demo = app.add_subcommand("demo", "Run a built-in showcase config");
  demo->add_option("experiment", demo_name, "dw | wolff | metrics_equiv | horo | retract | maxball_probe | oracle_equiv")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return execute(ncgeom::load_config_file(run_path), quiet);
    if (*validate) {
      const auto cfg = ncgeom::load_config_file(validate_path);
      if (!quiet) std::cout << "ok: " << cfg.experiment << " on " << cfg.domain->name() << " (d = " << cfg.domain->dim() << ")\n";
      return 0;
    }
    return execute(ncgeom::load_config(ncgeom::demo_config(demo_name)), quiet);
  } catch (const ncgeom::property_violation& e) {
    std::cerr << "property violation: " << e.what() << "\n";
    return 1;
  } catch (const ncgeom::invalid_input& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const ncgeom::precondition_failure& e) {
    std::cerr << "precondition failure: " << e.what() << "\n";
    return 2;
  } catch (const ncgeom::domain_violation& e) {
    std::cerr << "domain violation: " << e.what() << "\n";
    return 3;
  } catch (const ncgeom::numerical_failure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

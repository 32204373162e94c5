// fourthorder: coincidence scans of distorted two-photon packets.

#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  using namespace fourthorder::cli;

  CLI::App app{"Fourth-order interference behind multilayer barriers"};
  app.require_subcommand(1);
  app.fallthrough();

  OutputOptions options;
  std::string out_dir = ".";
  double points_per_period = 0.0;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_flag("--quiet", options.quiet, "Suppress progress output");
  auto* ppp = app.add_option("--points-per-period", points_per_period,
                             "Samples per oscillation period on the starting grid");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Evaluate one scenario file");
  run->add_option("config", config_path, "Scenario file")->required();

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a scenario for each swept value");
  sweep->add_option("config", sweep_path, "Scenario file with a sweep block")->required();

  auto* table = app.add_subcommand("check-table1",
                                   "Check the reduction/enhancement bounds per regime");

  SpectrumRequest spectrum_request;
  std::string stack_path;
  std::string spectrum_out = "spectrum.csv";
  auto* spectrum = app.add_subcommand("spectrum", "Export the transmission of a stack");
  spectrum->add_option("stack", stack_path, "Stack file")->required();
  spectrum->add_option("--omega-min", spectrum_request.omega_min, "rad/s")->required();
  spectrum->add_option("--omega-max", spectrum_request.omega_max, "rad/s")->required();
  spectrum->add_option("--n-points", spectrum_request.n_points, "Grid size")
      ->default_val(2001);
  spectrum->add_option("--file", spectrum_out, "CSV name inside --out")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  options.out_dir = out_dir;
  if (*ppp) options.points_per_period = points_per_period;

  if (*run) return run_command(config_path, options, std::cout, std::cerr);
  if (*sweep) return sweep_command(sweep_path, options, std::cout, std::cerr);
  if (*table) return check_table1_command(options, std::cout, std::cerr);
  if (*spectrum) {
    spectrum_request.stack_path = stack_path;
    spectrum_request.output = spectrum_out;
    return spectrum_command(spectrum_request, options, std::cout, std::cerr);
  }
  return exit_failure;
}

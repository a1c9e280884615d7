// Command-line front end: simulate | optimize | gradcheck | feasibility.

#include "tumorctl/commands.hpp"
#include "tumorctl/config.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Options {
  std::string config_path;
  std::string preset = "paper-sec6";
  std::string out = "out";
  std::string seed_control;
  std::vector<double> snapshot_times;
  bool allow_infeasible = false;
};

tumorctl::Config build_config(const Options& o) {
  tumorctl::Config c = tumorctl::preset(o.preset);
  if (!o.config_path.empty()) c = tumorctl::load_config(o.config_path, c);
  if (!o.seed_control.empty()) c.seed_control = tumorctl::parse_seed_control(o.seed_control);
  if (!o.snapshot_times.empty()) c.snapshot_times = o.snapshot_times;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal anti-tumor drug dosing: forward simulation, adjoint gradients and gradient descent"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Config file (key = value lines or JSON)")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "Base scenario: paper-sec6 | zero-control | coarse")
        ->check(CLI::IsMember({"paper-sec6", "zero-control", "coarse"}));
    sub->add_option("--seed-control", o.seed_control, "Initial control: zero | dosing | constant-feasible")
        ->check(CLI::IsMember({"zero", "dosing", "constant-feasible"}));
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--snapshot-times", o.snapshot_times, "Snapshot times in days (comma separated)")
        ->delimiter(',');
  };

  auto* simulate = app.add_subcommand("simulate", "Forward solve for the seed control");
  add_common(simulate);
  add_output(simulate);
  auto* optimize = app.add_subcommand("optimize", "Run the gradient-descent optimizer");
  add_common(optimize);
  add_output(optimize);
  optimize->add_flag("--allow-infeasible", o.allow_infeasible, "Run even if no constant control is admissible");
  auto* gradcheck = app.add_subcommand("gradcheck", "Compare adjoint gradient with central differences");
  add_common(gradcheck);
  gradcheck->add_option("--out", o.out, "Directory for gradient.csv");
  auto* feasibility = app.add_subcommand("feasibility", "Evaluate the constant-control feasibility condition");
  add_common(feasibility);

  CLI11_PARSE(app, argc, argv);

  try {
    const tumorctl::Config config = build_config(o);
    if (simulate->parsed()) return tumorctl::cmd_simulate(config, o.out, std::cout);
    if (optimize->parsed()) return tumorctl::cmd_optimize(config, o.out, o.allow_infeasible, std::cout);
    if (gradcheck->parsed()) return tumorctl::cmd_gradcheck(config, o.out, std::cout);
    if (feasibility->parsed()) return tumorctl::cmd_feasibility(config, std::cout);
  } catch (const tumorctl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return tumorctl::kExitUsage;
  } catch (const tumorctl::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return tumorctl::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tumorctl::kExitCheckFailed;
  }
  return tumorctl::kExitUsage;
}

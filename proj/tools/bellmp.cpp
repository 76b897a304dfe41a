// bellmp: evaluate, optimize and certify d-outcome CHSH-type Bell values under
// Bell-multiport measurements.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bellmp/cli.hpp"

namespace {

using bellmp::cli::json;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  using namespace bellmp;

  CLI::App app{"Bell-multiport CHSH-type inequality toolkit"};
  app.require_subcommand(1);

  std::optional<int> d;
  std::string state_spec;
  std::string angles_path;
  std::optional<double> noise;
  std::string variant_name = "plus";
  std::string direction_name = "max";
  bool free_state = false;
  int restarts = 50;
  std::uint64_t seed = 0;
  std::int64_t shots = 0;
  bool as_json = false;
  std::string csv_path;
  cli::ScanSpec scan;

  auto add_variant = [&](CLI::App* sub) {
    sub->add_option("--variant", variant_name, "Kernel variant: plus (m+n) or minus (m-n)")
        ->check(CLI::IsMember({"plus", "minus"}));
  };

  auto* eval = app.add_subcommand("eval", "Bell value, correlations and probability tables");
  eval->add_option("--d", d, "Dimension (checked against --state)");
  eval->add_option("--state", state_spec, "Comma-separated Schmidt coefficients (auto-normalized)")->required();
  eval->add_option("--angles", angles_path, "Angle JSON file")->required();
  eval->add_option("--noise", noise, "Isotropic noise fraction F in [0,1]");
  add_variant(eval);
  eval->add_flag("--json", as_json, "JSON output (default)");

  int lhv_d = 4;
  auto* lhv = app.add_subcommand("lhv", "Exact classical bounds by exhaustive enumeration");
  lhv->add_option("--d", lhv_d, "Dimension, 2..12");
  add_variant(lhv);
  lhv->add_flag("--json", as_json, "JSON output (default)");

  auto* optimize = app.add_subcommand("optimize", "Multi-start optimization of the Bell value");
  optimize->add_option("--d", d, "Dimension (default: length of --state, or 4)");
  optimize->add_option("--state", state_spec, "Fixed state (omit with --free-state)");
  optimize->add_option("--direction", direction_name, "max or min")->check(CLI::IsMember({"max", "min"}));
  optimize->add_flag("--free-state", free_state, "Optimize the state coefficients too");
  optimize->add_option("--restarts", restarts, "Number of random restarts")->check(CLI::PositiveNumber);
  optimize->add_option("--seed", seed, "Seed of the restart generators");
  add_variant(optimize);
  optimize->add_flag("--json", as_json, "JSON output (default)");

  auto* analytic = app.add_subcommand("analytic", "Closed-form d=4 extrema for a state");
  analytic->add_option("--state", state_spec, "Comma-separated coefficients (default maximally entangled)");
  analytic->add_flag("--json", as_json, "JSON output (default)");

  auto* reproduce = app.add_subcommand("reproduce", "Recompute every reference value and compare");
  reproduce->add_option("--restarts", restarts, "Restarts per optimization")->check(CLI::PositiveNumber);
  reproduce->add_option("--seed", seed, "Seed of the restart generators");
  reproduce->add_flag("--json", as_json, "JSON instead of the human-readable table");

  auto* scan_cmd = app.add_subcommand("scan", "CSV of closed-form values along a = normalize(1,1,r,r)");
  scan_cmd->add_option("--family", scan.family, "State family (step)");
  scan_cmd->add_option("--from", scan.r_from, "First r");
  scan_cmd->add_option("--to", scan.r_to, "Last r");
  scan_cmd->add_option("--steps", scan.steps, "Grid points (>= 2)");
  scan_cmd->add_option("--csv", csv_path, "Write CSV here instead of stdout");

  auto* sample = app.add_subcommand("sample", "Finite-shot simulation of the experiment");
  sample->add_option("--state", state_spec, "Comma-separated coefficients")->required();
  sample->add_option("--angles", angles_path, "Angle JSON file")->required();
  sample->add_option("--shots", shots, "Shots per setting pair")->required();
  sample->add_option("--seed", seed, "Sampler seed");
  add_variant(sample);
  sample->add_flag("--json", as_json, "JSON output (default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return cli::kValidationError;
  }

  try {
    const KernelVariant variant = parse_variant(variant_name);

    if (eval->parsed()) {
      const auto state = cli::parse_state_spec(state_spec, d);
      emit(cli::cmd_eval(state, cli::read_angle_file(angles_path), noise, variant));
    } else if (lhv->parsed()) {
      emit(cli::cmd_lhv(lhv_d, variant));
    } else if (optimize->parsed()) {
      OptimizerConfig config;
      config.restarts = restarts;
      config.seed = seed;
      config.direction = parse_direction(direction_name);
      config.free_state = free_state;
      config.variant = variant;
      std::optional<PureState> state;
      if (!state_spec.empty()) {
        if (free_state) throw cli::ValidationError("optimize: --state and --free-state are exclusive");
        state = cli::parse_state_spec(state_spec, d);
      }
      const int dim = d ? *d : (state ? state->dim().value() : 4);
      emit(cli::cmd_optimize(dim, state, config));
    } else if (analytic->parsed()) {
      const auto state = state_spec.empty() ? PureState::maximally_entangled(Dimension(4))
                                            : cli::parse_state_spec(state_spec, 4);
      emit(cli::cmd_analytic(state));
    } else if (reproduce->parsed()) {
      cli::ReproduceOptions options;
      options.restarts = restarts;
      options.seed = seed;
      const auto report = cli::cmd_reproduce(options);
      if (as_json) {
        emit(cli::to_json(report));
      } else {
        cli::print_report(report, std::cout);
      }
      return report.overall_pass ? cli::kSuccess : cli::kReproductionFailure;
    } else if (scan_cmd->parsed()) {
      if (csv_path.empty()) {
        cli::cmd_scan(scan, std::cout);
      } else {
        std::ofstream out(csv_path);
        if (!out) throw cli::ValidationError("cannot write '" + csv_path + "'");
        cli::cmd_scan(scan, out);
      }
    } else if (sample->parsed()) {
      emit(cli::cmd_sample(cli::parse_state_spec(state_spec), cli::read_angle_file(angles_path), shots, seed, variant));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kValidationError;
  }
  return cli::kSuccess;
}

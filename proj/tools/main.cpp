#include "nikishin/cli/commands.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

using namespace nikishin::cli;

int main(int argc, char** argv) {
  CLI::App app{"Vector equilibrium measures on interlaced half-lines and their spectral curves"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads, variant;
  std::optional<double> a;
  std::optional<std::string> curve;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "JSON configuration file");
    if (needs_config) c->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "solver seed (overrides solver.seed)");
    sub->add_option("--threads", threads, "OpenMP thread count")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "solve the equilibrium problem");
  common(solve, true);
  auto* verify = app.add_subcommand("verify", "re-check the variational conditions of a stored solution");
  common(verify, true);
  auto* curve_cmd = app.add_subcommand("curve", "curve coefficients, branches and branchpoints");
  common(curve_cmd, true);
  auto* compare = app.add_subcommand("compare", "compare a curve against the closed-form variants");
  common(compare, false);
  compare->add_option("--a", a, "log strength of the closed-form family");
  compare->add_option("--variant", variant, "restrict to one variant (3 or 6)");
  compare->add_option("--curve", curve, "curve.csv to compare (default: <out>/curve.csv)");
  auto* example = app.add_subcommand("example", "closed-form two-component example");
  common(example, false);
  example->add_option("--a", a, "log strength a >= 0")->required();
  example->add_option("--variant", variant, "1/x^2 numerator variant (3 or 6, default 3)");
  auto* adm = app.add_subcommand("admissibility", "sampled admissibility probes");
  common(adm, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  RunConfig cfg = parse_config(json::object());
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (seed) cfg.solver.seed = *seed;
  if (!out_dir.empty()) cfg.output.directory = out_dir;
  if (threads) omp_set_num_threads(*threads);
  const std::string out = cfg.output.directory;

  try {
    if (*solve) return cmd_solve(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*curve_cmd) return cmd_curve(cfg, out);
    if (*compare) return cmd_compare(cfg, out, a, variant, curve);
    if (*example) {
      const int v = variant.value_or(3);
      if (v != 3 && v != 6) {
        std::cerr << "config error: --variant: must be 3 or 6\n";
        return kConfigError;
      }
      return cmd_example(cfg, out, *a, v);
    }
    if (*adm) return cmd_admissibility(cfg, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kConfigError;
}

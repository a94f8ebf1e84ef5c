#pragma once

#include "nikishin/equilibrium.hpp"
#include "nikishin/model.hpp"
#include "nikishin/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nikishin::cli {

using json = nlohmann::ordered_json;

/// Invalid or unknown configuration entry; `key` is the dotted path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ComponentParams {
  double b = 1.0;
  double a = 1.0;
  double mass = 1.0;
};

struct ProblemBlock {
  int R = 2;
  std::vector<double> q;                  // default: all ones
  std::vector<ComponentParams> components; // default: R copies of {1, 1, 1}
  bool strict_admissibility = false;
  ProbeGrid probes;
};

struct DiscretizationBlock {
  int n = 800;
  double ratio = 1.0;
  double r_min = 1e-3;
  std::optional<double> r_max;  // default: chosen from margin
  double margin = 50.0;
  int max_doublings = 4;
};

struct SolverBlock {
  double kkt_tol = 1e-9;
  double support_tol = 1e-8;
  int max_iterations = 200000;
  std::uint64_t seed = 1;
  bool random_init = true;
  double verify_tol = 1e-3;
};

struct SpectralBlock {
  bool enabled = true;
  double eps_rel = 1e-6;
  bool richardson = true;
  std::vector<Interval> windows;  // default: [-X, X] around the supports
  double sweep_margin = 12.0;     // X = max |support end| + sweep_margin
  double pole_gap = 1e-2;         // half-width excluded around each pole
  int sweep_points = 801;
  int scan_points = 4001;
  double bisect_tol = 1e-12;
  double tangency_tol = 1e-10;
  double merge_cells = 2.0;       // discriminant zeros within this many cells merge
  int jump_points = 5;            // probes per support for jump residuals
  double compare_bound = 0.05;    // C_3 relative error
  double compare_bound_c2 = 0.02;
  std::optional<Interval> compare_window;  // default: [x_out + 1, x_out + 10]
};

struct OutputBlock {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json"};
};

struct RunConfig {
  ProblemBlock problem;
  DiscretizationBlock discretization;
  SolverBlock solver;
  SpectralBlock spectral;
  OutputBlock output;
};

/// Strict parse: unknown keys and out-of-range values raise ConfigError.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

/// Fully resolved configuration (defaults filled in).
json to_json(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the resolved configuration, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

ProblemSpec make_problem(const RunConfig& cfg);
SolveConfig make_solve_config(const RunConfig& cfg);
GridSpec make_grid_spec(const RunConfig& cfg);
SpectralOptions make_spectral_options(const RunConfig& cfg);

/// The log strength a when the problem is the closed-form two-component
/// family (R = 2, q = 1, b = 1, equal a, unit masses).
std::optional<double> example_strength(const RunConfig& cfg);

}  // namespace nikishin::cli

#pragma once

#include "nikishin/cli/config.hpp"

#include <optional>
#include <string>

namespace nikishin::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNonConvergence = 3,
  kWindowExhausted = 4,
};

/// densities.csv + report.json.
int cmd_solve(const RunConfig& cfg, const std::string& out_dir);

/// Re-checks the variational conditions of the stored solution; verify.json.
int cmd_verify(const RunConfig& cfg, const std::string& out_dir);

/// curve.csv + branchpoints.json from the stored solution.
int cmd_curve(const RunConfig& cfg, const std::string& out_dir);

/// Far-field comparison of a curve.csv against both closed-form variants;
/// compare.json. `a` defaults to the configured example strength, `curve`
/// to out_dir/curve.csv, `variant` restricts the candidate set.
int cmd_compare(const RunConfig& cfg, const std::string& out_dir, std::optional<double> a,
                std::optional<int> variant, std::optional<std::string> curve);

/// Closed-form densities.csv, curve.csv, branchpoints.json, exponents.json.
int cmd_example(const RunConfig& cfg, const std::string& out_dir, double a, int variant);

/// admissibility.json.
int cmd_admissibility(const RunConfig& cfg, const std::string& out_dir);

}  // namespace nikishin::cli

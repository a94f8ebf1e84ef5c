#pragma once

#include "nikishin/discretization.hpp"
#include "nikishin/errors.hpp"
#include "nikishin/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nikishin {

struct SolveConfig {
  std::vector<double> masses;        // one per component
  int max_iterations = 200000;
  double kkt_tol = 1e-9;             // relative to scale_j = max|phi^j|
  double support_tol = 1e-8;         // density cutoff, mass per unit length
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double step_min = 1e-14;           // clamps for the Barzilai-Borwein step
  double step_max = 1e14;
  std::uint64_t seed = 1;
  bool random_init = true;           // false: uniform weights
  bool record_energy = false;        // keep the per-iteration energy trace
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ComponentKkt {
  bool excluded = false;    // zero-mass component
  double robin = 0.0;       // F_j
  double on_support = 0.0;  // max |phi - F| over support cells
  double off_support = 0.0; // max (F - phi)_+ over the remaining cells
  double scale = 0.0;       // max |phi| over the grid
  int support_cells = 0;
  bool pass = false;
};

struct SolveReport {
  double energy = 0.0;
  std::vector<ComponentKkt> kkt;
  std::vector<std::vector<Interval>> supports;
  std::vector<bool> touches_inner_edge;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
  std::vector<double> energy_trace;

  std::vector<double> robin_constants() const;
};

/// Best iterate and its residuals after max_iterations without convergence.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, VectorMeasure best, SolveReport report)
      : std::runtime_error(what), best_(std::move(best)), report_(std::move(report)) {}
  const VectorMeasure& best() const { return best_; }
  const SolveReport& report() const { return report_; }

 private:
  VectorMeasure best_;
  SolveReport report_;
};

/// A support cell reached r_max; re-run with a doubled window.
class WindowTooSmall : public std::runtime_error {
 public:
  WindowTooSmall(const std::string& what, int component, VectorMeasure mu, SolveReport report)
      : std::runtime_error(what), component_(component), mu_(std::move(mu)),
        report_(std::move(report)) {}
  int component() const { return component_; }
  const VectorMeasure& measure() const { return mu_; }
  const SolveReport& report() const { return report_; }

 private:
  int component_;
  VectorMeasure mu_;
  SolveReport report_;
};

/// The doubling loop hit its cap.
class WindowExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euclidean projection of u onto {w >= 0, sum w = mass}.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& u, double mass);

/// Projected gradient with a Barzilai-Borwein trial step and Armijo
/// backtracking on the exact quadratic energy.
std::pair<VectorMeasure, SolveReport> solve(const KernelSystem& sys, const SolveConfig& cfg);

/// Same, starting from the given feasible weights.
std::pair<VectorMeasure, SolveReport> solve_from(const KernelSystem& sys, const SolveConfig& cfg,
                                                 Weights start);

/// KKT residuals and supports of an arbitrary measure.
std::vector<ComponentKkt> kkt_residuals(const KernelSystem& sys, const Weights& w,
                                        const Weights& phi, double support_tol, double tol);

struct VariationalReport {
  std::vector<ComponentKkt> components;
  bool pass = false;
};

/// Robin constants and discrete Euler-Lagrange residuals; support cells are
/// those with density above support_tol.
VariationalReport verify_variational(const VectorMeasure& mu, const KernelSystem& sys, double tol,
                                     double support_tol = 1e-8);

/// Maximal runs of cells with density > support_tol, as physical intervals
/// sorted by left end.
std::vector<std::vector<Interval>> support_intervals(const VectorMeasure& mu, double support_tol);

struct FrozenResult {
  Eigen::VectorXd weights;
  SolveReport report;
};

/// Minimizes the single-component energy of component k (0-based) with every
/// other component frozen at mu.
FrozenResult solve_frozen(int k, const VectorMeasure& mu, const KernelSystem& sys,
                          const SolveConfig& cfg);

/// Single-component system for the frozen-neighbour problem.
KernelSystem frozen_system(int k, const VectorMeasure& mu, const KernelSystem& sys);

struct ProblemSpec {
  InteractionMatrix A;
  std::vector<PotentialSpec> potentials;
  std::vector<Conductor> conductors;
};

struct GridSpec {
  int n = 800;
  double ratio = 1.0;
};

struct Solution {
  std::vector<Conductor> conductors;  // final windows
  KernelSystem sys;
  VectorMeasure mu;
  SolveReport report;
  int doublings = 0;
};

/// Conductors with r_max chosen so that V_j(r_max) >= min V_j + margin.
std::vector<Conductor> default_conductors(std::span<const PotentialSpec> potentials,
                                          double r_min = 1e-3, double margin = 50.0);

/// Builds grids, assembles and solves; doubles r_max whenever a support
/// touches it, at most max_doublings times.
Solution solve_problem(const ProblemSpec& problem, const GridSpec& grid, const SolveConfig& cfg,
                       int max_doublings = 4);

}  // namespace nikishin

#pragma once

// Conductors, external potentials and interaction matrices for the
// interlaced half-line problem, plus a sampling-based admissibility check.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nikishin {

/// Truncated half-line s*[r_min, r_max] with s = (-1)^(index-1).
struct Conductor {
  int index = 1;  // 1-based
  double r_min = 1e-3;
  double r_max = 1.0;

  int sign() const { return index % 2 == 1 ? 1 : -1; }
  double physical(double r) const { return sign() * r; }
};

/// Validates 0 < r_min < r_max and index >= 1.
Conductor make_conductor(int index, double r_min, double r_max);

/// Standard Nikishin chain: conductor j is (-1)^(j-1)[r_min, r_max].
std::vector<Conductor> interlaced_conductors(int count, double r_min, double r_max);

/// Square matrix of pair-interaction coefficients. Symmetry and positive
/// definiteness are checked by check_positive_definite, not on construction,
/// so that rejected candidates can still be represented and reported.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;
  explicit InteractionMatrix(Eigen::MatrixXd entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  double operator()(int j, int k) const { return entries_(j, k); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  bool is_symmetric() const;

 private:
  Eigen::MatrixXd entries_;
};

InteractionMatrix build_nikishin_matrix(int count, std::span<const double> q);

struct DefinitenessResult {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
};

DefinitenessResult check_positive_definite(const InteractionMatrix& A);

/// If A is tridiagonal with diagonal 2 q_j^2 and off-diagonal -q_j q_{j+1},
/// returns q; otherwise nullopt.
std::optional<std::vector<double>> nikishin_scales(const InteractionMatrix& A,
                                                   double tol = 1e-12);

/// Additional real-analytic term of a potential with the real poles of its
/// derivative declared up front.
struct PotentialTerm {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<double> poles;
};

/// V(x) = b*|x| - a*ln|x| (+ extra) on the half-line with orientation `sign`.
/// derivative() is the analytic continuation b*sign - a/x (+ extra') and is
/// valid off the conductor as well.
class PotentialSpec {
 public:
  PotentialSpec() = default;
  PotentialSpec(int sign, double b, double a, std::optional<PotentialTerm> extra = {});

  static PotentialSpec half_line(int sign, double b, double a) { return {sign, b, a}; }

  int sign() const { return sign_; }
  double linear() const { return b_; }
  double log_strength() const { return a_; }
  bool has_extra() const { return extra_.has_value(); }

  /// Physical coordinate; +inf off the open conductor.
  double value(double x) const;
  double derivative(double x) const;
  std::vector<double> poles() const;

 private:
  int sign_ = 1;
  double b_ = 1.0;
  double a_ = 0.0;
  std::optional<PotentialTerm> extra_;
};

/// Family V_j(x) = b_j|x| - a_j ln|x| on conductor j.
std::vector<PotentialSpec> half_line_potentials(std::span<const Conductor> conductors,
                                                std::span<const double> b,
                                                std::span<const double> a);

/// Radial minimizer of V on the conductor (scan on a log grid).
double radial_minimizer(const PotentialSpec& V, double r_lo = 1e-8, double r_hi = 1e8);

/// Smallest r > argmin V with V(s r) >= min V + margin.
double window_for_margin(const PotentialSpec& V, double margin);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct Witness {
  int j = 0;  // 1-based component indices
  int k = 0;
  double z = 0.0;
  double t = 0.0;  // unused for single-point conditions
  double value = 0.0;
};

struct ConditionResult {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::vector<Witness> witnesses;
  std::string detail;
};

struct ProbeGrid {
  int decades_to_zero = 12;      // probes at 10^-1 ... 10^-decades_to_zero
  int decades_to_infinity = 6;   // probes at 10^1 ... 10^decades_to_infinity
  int points_per_decade = 4;
  double trend_tolerance = 1e-6; // per-decade decrease considered flat

  std::vector<double> radii() const;
};

struct AdmissibilityReport {
  std::array<ConditionResult, 5> conditions;  // [A1] .. [A5]
  double lower_bound_L = 0.0;                 // sampled inf of H_jk
  double fitted_c = 1.0;                      // [A4] candidates
  double fitted_C = 0.0;
  std::vector<double> q_lower_bounds;         // sampled inf of Q_k

  bool all_pass() const;
  bool any_fail() const;
};

/// H_jk(z,t) = (V_j(z)+V_k(t))/R + a_jk ln(1/|z-t|); j,k are 0-based.
double interaction_h(std::span<const PotentialSpec> V, const InteractionMatrix& A, int j,
                     int k, double z, double t);

/// h_l(z) = ln(1/d(z, Sigma_l)) for the untruncated half-line of sign s_l.
double distance_log(int sign_l, double z);

/// Q_k(z) of the growth condition; k is 0-based.
double growth_q(std::span<const PotentialSpec> V, const InteractionMatrix& A, int k, double z);

AdmissibilityReport check_admissibility(std::span<const PotentialSpec> potentials,
                                        std::span<const Conductor> conductors,
                                        const InteractionMatrix& A, const ProbeGrid& probes);

}  // namespace nikishin

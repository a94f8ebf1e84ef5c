#pragma once

// Resolvents, shifted resolvents and the algebraic curve they satisfy,
// computed from a discretized equilibrium measure.

#include "nikishin/discretization.hpp"
#include "nikishin/equilibrium.hpp"
#include "nikishin/errors.hpp"
#include "nikishin/model.hpp"
#include "nikishin/polynomial.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nikishin {

enum class Side { upper, lower };
inline double side_sign(Side s) { return s == Side::upper ? 1.0 : -1.0; }
std::string to_string(Side s);

/// W(z) = sum_i w_i/h_i ln((z - lo_i)/(z - hi_i)) over the physical cells of
/// one component. For real z the average of the two boundary values is
/// returned; exactly on a cell edge the divergent ln|z - edge| terms are
/// dropped.
cplx resolvent(const Grid& grid, const Eigen::VectorXd& weights, cplx z);

struct SpectralOptions {
  double eps_rel = 1e-6;     // eps = eps_rel * local cell width
  bool richardson = true;    // 2 W(eps/2) - W(eps)
  double support_tol = 1e-8; // density cutoff for "on a support"
};

struct ZFunctions {
  double x = 0.0;
  Side side = Side::upper;
  int sigma = 1;
  std::vector<cplx> W;  // W_1..W_R
  std::vector<cplx> Y;  // Y_1..Y_R
  std::vector<cplx> Z;  // Z_0..Z_R
};

/// Everything needed to evaluate the shifted resolvents of a solved problem.
/// Requires a Nikishin-type A (tridiagonal, diagonal 2q^2, off-diagonal -qq');
/// internally works with q_j W_j and V'_j / q_j against tridiag(-1, 2, -1).
class CurveModel {
 public:
  CurveModel(VectorMeasure mu, std::vector<PotentialSpec> potentials, const InteractionMatrix& A,
             SpectralOptions options = {});

  int components() const { return mu_.components(); }
  const VectorMeasure& measure() const { return mu_; }
  const std::vector<PotentialSpec>& potentials() const { return potentials_; }
  const std::vector<double>& scales() const { return q_; }
  const SpectralOptions& options() const { return opt_; }
  int sigma() const { return sigma_; }
  void set_sigma(int sigma);

  /// eps at x: eps_rel times the smallest width of the cells nearest x.
  double epsilon(double x) const;
  /// Declared poles of the V'_j.
  const std::vector<double>& poles() const { return poles_; }
  /// Boundary value W_j(x +/- i0) (Richardson-extrapolated), unscaled.
  cplx boundary_resolvent(int j, double x, Side side) const;
  /// Index of the component whose support contains x (density above
  /// support_tol in the cell containing x), or -1.
  int support_component(double x) const;

 private:
  VectorMeasure mu_;
  std::vector<PotentialSpec> potentials_;
  std::vector<double> q_;
  std::vector<double> poles_;
  Eigen::LLT<Eigen::MatrixXd> unit_;
  SpectralOptions opt_;
  int sigma_ = 1;

  friend ZFunctions z_functions(const CurveModel&, double, Side, int);
};

/// Y = sigma * diag(-1, 1, ..., (-1)^R) (q W - Aunit^{-1} V'/q) at x +/- i0 and
/// Z_0 = Y_1, Z_k = (-1)^k (Y_k + Y_{k+1}), Z_R = (-1)^R Y_R.
ZFunctions z_functions(const CurveModel& model, double x, Side side, int sigma);
ZFunctions z_functions(const CurveModel& model, double x, Side side);

struct SignCalibration {
  int sigma = 1;
  double min_recovered[2] = {0.0, 0.0};  // per candidate sigma (+1, -1)
  double max_recovered[2] = {0.0, 0.0};
  std::vector<cplx> far_field_z;         // Z at the far-field probe for the chosen sigma
  double far_field_x = 0.0;
};

/// Picks sigma so that the densities recovered from the jumps of Z are
/// nonnegative. Sets it on the model and returns the diagnostics.
SignCalibration calibrate_sign(CurveModel& model, double tol = 1e-6);

/// C_1 .. C_{R+1}: C_k = (-1)^k e_k(Z_0..Z_R).
std::vector<cplx> curve_coefficients(const CurveModel& model, double x, Side side);
std::vector<cplx> curve_coefficients(const ZFunctions& z);

struct JumpResidual {
  double x = 0.0;
  int component = 0;              // 1-based component whose support holds x
  std::vector<double> normalized; // k = 1..R+1
  std::vector<double> raw;        // |C_k(+) - C_k(-)|
  std::vector<double> dz;         // |Z_j(+) - Z_j(-)|, j = 0..R
  double density = 0.0;           // solver density of the cell containing x
  double max_normalized() const;
};

/// |dC_k| / (sum_j |dZ_j| * M^(k-1)) with M = max |Z_j| over both sides.
/// Throws std::invalid_argument off every support.
JumpResidual jump_residual(const CurveModel& model, double x);

using CoefficientFn = std::function<std::vector<cplx>(double)>;

struct SheetExchange {
  double lo = 0.0;  // bracket of the degenerate pairing
  double hi = 0.0;
  int path_a = 0;
  int path_b = 0;
};

struct BranchPaths {
  std::vector<double> x;
  std::vector<std::vector<cplx>> roots;  // roots[i][path]
  std::vector<SheetExchange> events;
  int paths() const { return roots.empty() ? 0 : static_cast<int>(roots.front().size()); }
};

struct TrackOptions {
  double min_step = 1e-9;        // bisection floor, relative to the sweep extent
  double collision_tol = 1e-3;   // root gap (relative) treated as a coalescence at the floor
  int max_depth = 60;
};

/// Roots of z^n + C_1 z^(n-1) + ... + C_n along the sweep, matched to the
/// previous sample by minimal total displacement. `initial` (optional) fixes
/// the labels at xs.front().
BranchPaths track_branches(std::span<const double> xs, const CoefficientFn& coefficients,
                           const TrackOptions& options = {},
                           std::span<const cplx> initial = {});

enum class Chart { affine, reciprocal };

struct DiscriminantOptions {
  int scan_points = 4001;
  bool log_spacing = false;      // geometric scan (window must not contain 0)
  double bisect_tol = 1e-12;     // absolute bracket width
  // |disc| / max|root|^(n(n-1)) flagged without a sign change; blind to all
  // roots collapsing onto 0 together (use the reciprocal chart there)
  double tangency_tol = 1e-10;
  double merge_distance = 0.0;   // zeros closer than this are reported as one cluster
  Chart chart = Chart::affine;   // reciprocal: disc / C_n^(2(n-1))
  std::vector<double> poles;     // rejected in the affine chart
};

struct BranchPoint {
  double x = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool sign_change = true;  // false: tangency certificate
  int multiplicity = 1;     // estimated order of the zero
};

struct BranchPointSet {
  std::vector<BranchPoint> points;
  int count() const { return static_cast<int>(points.size()); }
};

/// Discriminant of the curve polynomial built from real coefficients.
double curve_discriminant(std::span<const cplx> coefficients, Chart chart = Chart::affine);

BranchPointSet discriminant_zeros(const CoefficientFn& coefficients, double lo, double hi,
                                  const DiscriminantOptions& options = {});

struct DensitySample {
  double x = 0.0;
  double density = 0.0;
};

/// rho_j from the conjugate pair among paths j-1, j (0-based labels) on the
/// claimed support; `scale` divides out q_j. Throws CurveInconsistency when no
/// sample on the support carries a complex pair.
std::vector<DensitySample> density_from_curve(const BranchPaths& branches, int j, Interval support,
                                              double scale = 1.0, double imag_tol = 1e-9);

/// Permutation of the roots after one turn of the circle |x - centre| = radius
/// (counter-clockwise): path i ends on root perm[i] of the start set.
std::vector<int> monodromy(const std::function<std::vector<cplx>(cplx)>& coefficients, cplx centre,
                           double radius, int steps = 2000);

/// Cycle lengths of a permutation, sorted descending.
std::vector<int> cycle_type(std::span<const int> perm);

}  // namespace nikishin

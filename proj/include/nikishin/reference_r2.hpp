#pragma once

// Closed-form two-component example: V_1(x) = x - a ln x on the positive
// half-line, V_2(x) = -x - a ln(-x) on the negative one, unit masses, and the
// cubic z^3 - R(x) z - D(x) = 0 with
//   R(x) = 1/3 + a^2/x^2,  D(x) = (2a^2 + 6a + c0)/(3x^2) - 2/27.

#include "nikishin/equilibrium.hpp"
#include "nikishin/polynomial.hpp"
#include "nikishin/spectral.hpp"

#include <optional>
#include <span>
#include <vector>

namespace nikishin {

struct ExampleParams {
  double a = 1.0;
  int c0 = 3;  // 1/x^2 numerator variant, 3 or 6

  void validate() const;
};

struct CubicCoefficients {
  double R = 0.0;
  double D = 0.0;
};

/// Throws PoleProximity at x = 0.
CubicCoefficients analytic_coefficients(const ExampleParams& p, double x);

/// Curve coefficients C_1..C_3 = {0, -R, -D}; the complex overload is for
/// loops around the origin.
std::vector<cplx> analytic_curve(const ExampleParams& p, double x);
std::vector<cplx> analytic_curve(const ExampleParams& p, cplx x);

/// 4 R^3 - 27 D^2.
double analytic_discriminant(const ExampleParams& p, double x);

struct TriplePointCertificate {
  double x = 0.0;
  std::vector<int> cycles;          // cycle type of the monodromy around x
  int reciprocal_multiplicity = 0;  // order of the zero of disc / D^4 at x
  bool sign_change = false;         // of the reciprocal discriminant
};

struct AnalyticBranchpoints {
  std::vector<double> points;  // ascending; -x_out, -x_in, x_in, x_out when a > 0
  double x_in = 0.0;
  double x_out = 0.0;
  std::optional<TriplePointCertificate> triple;  // a = 0 only
};

/// Real zeros of the discriminant, bisected to 1e-10 (relative below 1).
/// For a = 0 the origin is certified as a triple point and the remaining
/// real pair is reported as x_out.
AnalyticBranchpoints analytic_branchpoints(const ExampleParams& p);

/// Roots of the cubic at x in the deterministic order of depressed_cubic_roots.
std::vector<cplx> analytic_roots(const ExampleParams& p, double x);

/// |Im z| / pi of the conjugate pair, 0 when all roots are real.
double analytic_density(const ExampleParams& p, double x);

/// Integral of analytic_density over [lo, hi] (tanh-sinh quadrature).
double analytic_mass(const ExampleParams& p, double lo, double hi);

struct ExponentFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

/// Least-squares slope of ln(density) against ln(distance). Needs at least 20
/// samples with positive distance and density.
ExponentFit edge_exponent_fit(std::span<const double> distance, std::span<const double> density);

/// The two-component problem with b = 1, log strength a, q = (1, 1) and unit
/// masses, on windows chosen by default_conductors.
ProblemSpec example_problem(double a, double r_min = 1e-3, double margin = 50.0);

}  // namespace nikishin

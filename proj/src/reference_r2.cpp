#include "nikishin/reference_r2.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nikishin {

void ExampleParams::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("example: a must be >= 0");
  if (c0 != 3 && c0 != 6) throw std::invalid_argument("example: variant c0 must be 3 or 6");
}

namespace {

template <class T>
std::pair<T, T> coefficients_at(const ExampleParams& p, T x) {
  const T x2 = x * x;
  const T R = 1.0 / 3.0 + p.a * p.a / x2;
  const T D = (2.0 * p.a * p.a + 6.0 * p.a + p.c0) / (3.0 * x2) - 2.0 / 27.0;
  return {R, D};
}

// bisection on a sign change of f over [lo, hi]
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    const double tol = std::min(1e-10, 1e-14 * std::max(std::abs(lo), std::abs(hi)) + 1e-300);
    if (hi - lo <= std::max(tol, 4e-16 * std::abs(hi))) break;
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CubicCoefficients analytic_coefficients(const ExampleParams& p, double x) {
  p.validate();
  if (x == 0.0) throw PoleProximity("analytic_coefficients: x = 0 is a pole", 0.0);
  auto [R, D] = coefficients_at(p, x);
  return {R, D};
}

std::vector<cplx> analytic_curve(const ExampleParams& p, double x) {
  const CubicCoefficients c = analytic_coefficients(p, x);
  return {0.0, -c.R, -c.D};
}

std::vector<cplx> analytic_curve(const ExampleParams& p, cplx x) {
  p.validate();
  if (x == 0.0) throw PoleProximity("analytic_curve: x = 0 is a pole", 0.0);
  auto [R, D] = coefficients_at<cplx>(p, x);
  return {0.0, -R, -D};
}

double analytic_discriminant(const ExampleParams& p, double x) {
  const CubicCoefficients c = analytic_coefficients(p, x);
  return cubic_discriminant(-c.R, -c.D);
}

AnalyticBranchpoints analytic_branchpoints(const ExampleParams& p) {
  p.validate();
  auto disc = [&](double x) { return analytic_discriminant(p, x); };
  // geometric scan of the positive axis; the inner point moves to 0 with a
  const double top = 100.0 * (1.0 + p.a);
  const int N = 24000;
  const double lmin = std::log(1e-14), lmax = std::log(top);
  std::vector<double> zeros;
  double xprev = std::exp(lmin), dprev = disc(xprev);
  for (int i = 1; i < N; ++i) {
    const double x = std::exp(lmin + (lmax - lmin) * i / (N - 1));
    const double d = disc(x);
    if (d == 0.0) {
      zeros.push_back(x);
    } else if (dprev != 0.0 && std::signbit(d) != std::signbit(dprev)) {
      zeros.push_back(bisect(disc, xprev, x));
    }
    xprev = x;
    dprev = d;
  }
  AnalyticBranchpoints out;
  if (p.a == 0.0) {
    TriplePointCertificate cert;
    const auto perm = monodromy([&](cplx x) { return analytic_curve(p, x); }, 0.0, 1e-2, 4000);
    cert.cycles = cycle_type(perm);
    // reciprocal chart: disc / D^4 ~ -27 / D^2 ~ x^4
    double d1 = 1e-4, d2 = 2e-4;
    auto recip = [&](double x) {
      const auto c = analytic_coefficients(p, x);
      return analytic_discriminant(p, x) / std::pow(c.D, 4);
    };
    const double r1 = recip(d1), r2 = recip(d2);
    cert.reciprocal_multiplicity = static_cast<int>(std::lround(std::log2(r2 / r1)));
    cert.sign_change = std::signbit(recip(d1)) != std::signbit(recip(-d1));
    out.triple = cert;
    if (zeros.size() != 1) {
      std::ostringstream os;
      os << "analytic_branchpoints: expected one positive zero at a = 0, found " << zeros.size();
      throw std::runtime_error(os.str());
    }
    out.x_in = 0.0;
    out.x_out = zeros[0];
    out.points = {-zeros[0], zeros[0]};
    return out;
  }
  if (zeros.size() != 2) {
    std::ostringstream os;
    os << "analytic_branchpoints: expected two positive zeros, found " << zeros.size();
    throw std::runtime_error(os.str());
  }
  out.x_in = zeros[0];
  out.x_out = zeros[1];
  out.points = {-zeros[1], -zeros[0], zeros[0], zeros[1]};
  return out;
}

std::vector<cplx> analytic_roots(const ExampleParams& p, double x) {
  const CubicCoefficients c = analytic_coefficients(p, x);
  return depressed_cubic_roots(-c.R, -c.D);
}

double analytic_density(const ExampleParams& p, double x) {
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  if (std::abs(x) < 1e-60) {
    // u = z |x|^(2/3) keeps the coefficients finite next to the pole
    const double ax = std::abs(x);
    const double P = std::pow(ax, 4.0 / 3.0) / 3.0 + p.a * p.a * std::pow(ax, -2.0 / 3.0);
    const double Q = (2.0 * p.a * p.a + 6.0 * p.a + p.c0) / 3.0 - 2.0 * x * x / 27.0;
    const auto u = depressed_cubic_roots(-P, -Q);
    return std::abs(u[1].imag()) * std::pow(ax, -2.0 / 3.0) / std::numbers::pi;
  }
  const auto r = analytic_roots(p, x);
  return std::abs(r[1].imag()) / std::numbers::pi;
}

double analytic_mass(const ExampleParams& p, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("analytic_mass: empty interval");
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&](double x) { return analytic_density(p, x); }, lo, hi, 1e-12);
}

ExponentFit edge_exponent_fit(std::span<const double> distance, std::span<const double> density) {
  if (distance.size() != density.size())
    throw std::invalid_argument("edge_exponent_fit: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < distance.size(); ++i)
    if (distance[i] > 0.0 && density[i] > 0.0) {
      lx.push_back(std::log(distance[i]));
      ly.push_back(std::log(density[i]));
    }
  const int n = static_cast<int>(lx.size());
  if (n < 20) {
    std::ostringstream os;
    os << "edge_exponent_fit: " << n << " usable samples, need at least 20";
    throw std::invalid_argument(os.str());
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("edge_exponent_fit: distances are all equal");
  ExponentFit fit;
  fit.exponent = sxy / sxx;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - (my + fit.exponent * (lx[i] - mx));
    ss += r * r;
  }
  fit.stderr_ = std::sqrt(ss / (n - 2) / sxx);
  fit.samples = n;
  return fit;
}

ProblemSpec example_problem(double a, double r_min, double margin) {
  if (!(a >= 0.0)) throw std::invalid_argument("example_problem: a must be >= 0");
  const auto cond = interlaced_conductors(2, r_min, 1.0);
  const std::vector<double> b{1.0, 1.0}, av{a, a};
  ProblemSpec p;
  p.A = build_nikishin_matrix(2, std::vector<double>{1.0, 1.0});
  p.potentials = half_line_potentials(cond, b, av);
  p.conductors = default_conductors(p.potentials, r_min, margin);
  return p;
}

}  // namespace nikishin

#include "nikishin/spectral.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nikishin;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
  ProblemSpec problem;
  KernelSystem sys;
  VectorMeasure mu;
  SolveReport rep;
};

// Two-component example, a = 1, unit masses, on [1e-3, 8].
const Fixture& solved() {
  static const Fixture f = [] {
    Fixture out;
    std::vector<double> q{1.0, 1.0}, b{1.0, 1.0}, a{1.0, 1.0};
    out.problem.A = build_nikishin_matrix(2, q);
    out.problem.conductors = interlaced_conductors(2, 1e-3, 8.0);
    out.problem.potentials = half_line_potentials(out.problem.conductors, b, a);
    SolveConfig cfg;
    cfg.masses = {1.0, 1.0};
    auto sol = solve_problem(out.problem, GridSpec{400, 1.0}, cfg, 0);
    out.sys = std::move(sol.sys);
    out.mu = std::move(sol.mu);
    out.rep = std::move(sol.report);
    return out;
  }();
  return f;
}

CurveModel make_model() {
  const auto& f = solved();
  CurveModel m(f.mu, f.problem.potentials, f.problem.A);
  calibrate_sign(m);
  return m;
}

// centre of the cell holding the middle of support j (edges average two cells)
double mid_support(int j) {
  const auto& f = solved();
  const auto& iv = f.rep.supports[j].front();
  const Grid& g = f.mu.grids[j];
  return g.center(g.locate(0.5 * (iv.lo + iv.hi)));
}

}  // namespace

TEST_CASE("resolvent matches the quadrature Cauchy transform") {
  const auto& f = solved();
  for (int j = 0; j < 2; ++j) {
    const Grid& g = f.mu.grids[j];
    const Eigen::VectorXd& w = f.mu.weights[j];
    for (cplx z : {cplx(1.0, 0.5), cplx(-2.0, 1e-3), cplx(0.05, -0.2), cplx(30.0, 4.0), cplx(-6.0, -0.01)}) {
      const cplx ref = oracle::cauchy_transform(g, w, z);
      CHECK(std::abs(resolvent(g, w, z) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
      CHECK(std::abs(resolvent(g, w, std::conj(z)) - std::conj(resolvent(g, w, z))) <= 1e-14);
    }
    // real points outside the support: principal value is the plain integral
    for (double x : {12.0, -12.0, 0.0005}) {
      const cplx ref = oracle::cauchy_transform(g, w, cplx(x, 0.0));
      CHECK(std::abs(resolvent(g, w, cplx(x, 0.0)) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    }
    const cplx far = 1e6 * resolvent(g, w, cplx(1e6, 0.0));
    CHECK(far.real() == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("boundary values carry the density in their imaginary part") {
  auto m = make_model();
  const auto& mu = m.measure();
  for (int j = 0; j < 2; ++j) {
    const double x = mid_support(j);
    const int i = mu.grids[j].locate(x);
    const double rho = mu.density(j, i);
    const cplx up = m.boundary_resolvent(j, x, Side::upper);
    const cplx lo = m.boundary_resolvent(j, x, Side::lower);
    CHECK(up.imag() == doctest::Approx(-kPi * rho).epsilon(1e-5));
    CHECK(std::abs(up - std::conj(lo)) <= 1e-12 * std::abs(up));
    CHECK(m.support_component(x) == j);
  }
  CHECK(m.support_component(20.0) == -1);
  CHECK(m.epsilon(1.0) == doctest::Approx(1e-6 * mu.grids[0].width(0)).epsilon(1e-9));
}

TEST_CASE("Z functions: zero sum, Vieta round trip, symmetries") {
  auto m = make_model();
  for (double x : {0.7, -2.2, 3.0, -9.0, 15.0, 0.003}) {
    for (Side s : {Side::upper, Side::lower}) {
      auto z = z_functions(m, x, s);
      REQUIRE(z.Z.size() == 3);
      cplx sum = 0.0;
      double big = 0.0;
      for (const cplx& v : z.Z) {
        sum += v;
        big = std::max(big, std::abs(v));
      }
      CHECK(std::abs(sum) <= 1e-12 * (1.0 + big));
      auto c = curve_coefficients(z);
      CHECK(std::abs(c[0]) <= 1e-10 * (1.0 + big));
      auto roots = monic_roots(c);
      for (const cplx& v : z.Z) {
        double best = 1e300;
        for (const cplx& r : roots) best = std::min(best, std::abs(r - v));
        CHECK(best <= 1e-7 * (1.0 + big));
      }
    }
    // Schwarz reflection and the parity of the global sign
    auto up = curve_coefficients(m, x, Side::upper);
    auto dn = curve_coefficients(m, x, Side::lower);
    auto zneg = z_functions(m, x, Side::upper, -m.sigma());
    auto cneg = curve_coefficients(zneg);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(up[k] - std::conj(dn[k])) <= 1e-10 * (1.0 + std::abs(up[k])));
      const double par = (k % 2 == 0) ? -1.0 : 1.0;  // C_{k+1}
      CHECK(std::abs(cneg[k] - par * up[k]) <= 1e-12 * (1.0 + std::abs(up[k])));
    }
  }
  CHECK_THROWS_AS(z_functions(m, 0.0, Side::upper), PoleProximity);
  CHECK_THROWS_AS(z_functions(m, 1.0, Side::upper, 0), std::invalid_argument);
}

TEST_CASE("sign calibration and its far field") {
  const auto& f = solved();
  CurveModel m(f.mu, f.problem.potentials, f.problem.A);
  auto cal = calibrate_sign(m);
  CHECK(cal.sigma == 1);
  CHECK(m.sigma() == 1);
  CHECK(cal.min_recovered[0] >= -1e-6);
  CHECK(cal.min_recovered[1] < 0.0);
  REQUIRE(cal.far_field_z.size() == 3);
  // x -> +inf: W -> 0, V' -> (1, -1), Y -> (1/3, 1/3)
  CHECK(cal.far_field_z[0].real() == doctest::Approx(1.0 / 3).epsilon(0.05));
  CHECK(cal.far_field_z[1].real() == doctest::Approx(-2.0 / 3).epsilon(0.05));
  CHECK(cal.far_field_z[2].real() == doctest::Approx(1.0 / 3).epsilon(0.05));
  // roots of (z - 1/3)^2 (z + 2/3) at x = 1e3, Z_0 on the 1/3 root
  const auto z3 = z_functions(m, 1e3, Side::upper);
  const double lim[3] = {1.0 / 3, -2.0 / 3, 1.0 / 3};
  for (int k = 0; k < 3; ++k) CHECK(std::abs(z3.Z[k] - lim[k]) <= 5e-3);

  CurveModel empty(zero_measure(f.mu.grids), f.problem.potentials, f.problem.A);
  CHECK_THROWS_AS(calibrate_sign(empty), ConventionFailure);

  Eigen::MatrixXd bad(2, 2);
  bad << 2.0, -0.5, -0.5, 2.0;
  CHECK_THROWS_AS(CurveModel(f.mu, f.problem.potentials, InteractionMatrix(bad)), std::invalid_argument);
}

TEST_CASE("jump residual on the supports") {
  auto m = make_model();
  for (int j = 0; j < 2; ++j) {
    const double x = mid_support(j);
    auto jr = jump_residual(m, x);
    CHECK(jr.component == j + 1);
    CHECK(jr.max_normalized() <= 1e-2);
    // the jump of Z_j equals 2 pi q rho
    CHECK(jr.dz[j] == doctest::Approx(2.0 * kPi * jr.density).epsilon(0.02));
  }
  CHECK_THROWS_AS(jump_residual(m, 20.0), std::invalid_argument);
}

TEST_CASE("density recovered from tracked branches matches the solver") {
  auto m = make_model();
  const auto& f = solved();
  const Grid& g = f.mu.grids[0];
  const auto& iv = f.rep.supports[0].front();
  std::vector<double> xs;
  for (int i = 0; i < g.size(); ++i)
    if (g.center(i) > iv.lo && g.center(i) < iv.hi) xs.push_back(g.center(i));
  CoefficientFn coef = [&](double x) { return curve_coefficients(m, x, Side::upper); };
  auto z0 = z_functions(m, xs.front(), Side::upper);
  auto br = track_branches(xs, coef, {}, z0.Z);
  auto dens = density_from_curve(br, 1, iv);
  REQUIRE(dens.size() == xs.size());
  double l1 = 0.0, mass = 0.0;
  for (const auto& s : dens) {
    const int i = g.locate(s.x);
    l1 += std::abs(s.density - f.mu.density(0, i)) * g.width(i);
    mass += f.mu.weights[0](i);
  }
  CHECK(l1 <= 0.02 * mass);

  std::vector<double> out{10.0, 11.0, 12.0};
  auto far = track_branches(out, coef);
  CHECK_THROWS_AS(density_from_curve(far, 1, Interval{10.0, 12.0}), CurveInconsistency);
  CHECK_THROWS_AS(density_from_curve(far, 3, Interval{10.0, 12.0}), std::invalid_argument);
}

TEST_CASE("branch tracking: smooth paths, sheet exchange, collision") {
  std::vector<double> xs;
  for (int i = 0; i <= 40; ++i) xs.push_back(1.0 + i / 40.0);
  CoefficientFn sq = [](double x) { return std::vector<cplx>{0.0, -x}; };
  auto br = track_branches(xs, sq);
  CHECK(br.events.empty());
  CHECK(br.paths() == 2);
  const double s0 = br.roots.front()[0].real();
  for (const auto& r : br.roots) CHECK(std::signbit(r[0].real()) == std::signbit(s0));

  std::vector<double> through;
  for (int i = 0; i <= 40; ++i) through.push_back(1.0 - i / 20.0);
  auto ex = track_branches(through, sq);
  REQUIRE(ex.events.size() == 1);
  CHECK(ex.events[0].lo <= 1e-6);
  CHECK(ex.events[0].hi >= -1e-6);

  std::vector<cplx> init{cplx(1.0), cplx(-1.0)};
  auto lab = track_branches(xs, sq, {}, init);
  CHECK(lab.roots.front()[0].real() == doctest::Approx(1.0));

  CoefficientFn jump = [](double x) {
    if (x < 0.5) return std::vector<cplx>{-1.0, 0.0};  // roots 0, 1
    return std::vector<cplx>{-1.1, 0.3};                // roots 0.5, 0.6
  };
  std::vector<double> two{0.0, 1.0};
  try {
    track_branches(two, jump);
    FAIL("expected BranchCollision");
  } catch (const BranchCollision& e) {
    CHECK(e.lo() <= 0.5);
    CHECK(e.hi() >= 0.5);
  }
  std::vector<double> rep{0.0, 0.0};
  CHECK_THROWS_AS(track_branches(rep, sq), std::invalid_argument);
}

TEST_CASE("discriminant zeros: crossings, tangency, poles") {
  CoefficientFn lin = [](double x) { return std::vector<cplx>{0.0, -x + 0.3}; };
  auto a = discriminant_zeros(lin, -1.0, 1.0);
  REQUIRE(a.count() == 1);
  CHECK(a.points[0].x == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(a.points[0].sign_change);

  // roots 1 +/- x: disc = 4x^2 touches zero at the origin
  CoefficientFn tan = [](double x) { return std::vector<cplx>{-2.0, 1.0 - x * x}; };
  auto t = discriminant_zeros(tan, -1.0, 1.3);
  REQUIRE(t.count() == 1);
  CHECK_FALSE(t.points[0].sign_change);
  CHECK(std::abs(t.points[0].x) <= 1e-3);
  CHECK(t.points[0].multiplicity >= 2);

  CoefficientFn none = [](double) { return std::vector<cplx>{0.0, -1.0}; };
  CHECK(discriminant_zeros(none, -1.0, 1.0).count() == 0);

  DiscriminantOptions po;
  po.poles = {0.0};
  CHECK_THROWS_AS(discriminant_zeros(lin, -1.0, 1.0, po), std::invalid_argument);
  CHECK_NOTHROW(discriminant_zeros(lin, 0.1, 1.0, po));

  // two zeros closer than the merge distance cancel, three leave one
  CoefficientFn pair = [](double x) { return std::vector<cplx>{0.0, -(x - 0.5) * (x - 0.502)}; };
  CHECK(discriminant_zeros(pair, 0.0, 1.0).count() == 2);
  DiscriminantOptions md;
  md.merge_distance = 5e-3;
  CHECK(discriminant_zeros(pair, 0.0, 1.0, md).count() == 0);

  std::vector<cplx> c{0.0, -2.0, 1.0};
  std::vector<double> cr{0.0, -2.0, 1.0};
  CHECK(curve_discriminant(c) == doctest::Approx(sylvester_discriminant(cr)));
  CHECK(curve_discriminant(c, Chart::reciprocal) == doctest::Approx(sylvester_discriminant(cr)));
}

TEST_CASE("monodromy and cycle type") {
  auto sq = [](cplx x) { return std::vector<cplx>{0.0, -x}; };
  auto p = monodromy(sq, 0.0, 0.5);
  CHECK(cycle_type(p) == std::vector<int>{2});
  auto q = monodromy(sq, 2.0, 0.5);
  CHECK(cycle_type(q) == std::vector<int>{1, 1});
  auto cube = [](cplx x) { return std::vector<cplx>{0.0, 0.0, -x}; };
  CHECK(cycle_type(monodromy(cube, 0.0, 1.0)) == std::vector<int>{3});
  std::vector<int> bad{0, 0};
  CHECK_THROWS_AS(cycle_type(bad), std::invalid_argument);
  CHECK_THROWS_AS(monodromy(sq, 0.0, -1.0), std::invalid_argument);
}

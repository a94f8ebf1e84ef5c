// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include "nikishin/cli/config.hpp"
#include "nikishin/cli/io.hpp"
#include "nikishin/reference_r2.hpp"

#include "oracles.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <tuple>
#include <algorithm>
#include <numbers>
#include <sstream>
#include <string>

using namespace nikishin;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <typename... T>
std::string fmt(const char* f, T... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

SolveConfig unit_masses(std::uint64_t seed = 1) {
  SolveConfig c;
  c.masses = {1.0, 1.0};
  c.seed = seed;
  return c;
}

// Example-family solutions, cached by (a, n, seed).
const Solution& solution(double a, int n, std::uint64_t seed = 1) {
  static std::map<std::tuple<double, int, std::uint64_t>, Solution> cache;
  auto key = std::make_tuple(a, n, seed);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, solve_problem(example_problem(a), GridSpec{n, 1.0}, unit_masses(seed))).first;
  return it->second;
}

CurveModel curve_model(const Solution& s) {
  const auto prob = example_problem(1.0);
  CurveModel m(s.mu, prob.potentials, prob.A);
  calibrate_sign(m);
  return m;
}

// Cell centres at fixed fractions of each support.
std::vector<double> mid_support_points(const Solution& s) {
  std::vector<double> xs;
  for (int j = 0; j < 2; ++j) {
    const auto& iv = s.report.supports[j].front();
    const Grid& g = s.mu.grids[j];
    for (double f : {0.25, 0.5, 0.75}) xs.push_back(g.center(g.locate(iv.lo + f * (iv.hi - iv.lo))));
  }
  return xs;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(NIKISHIN_TOOL) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void criterion_1() {
  const fs::path dir = fs::path(TEST_SCRATCH) / "a1";
  fs::remove_all(dir);
  const std::string cfg = std::string(SOURCE_DIR) + "/configs/example_a1.json";
  const std::string common = " --config " + cfg + " --out " + dir.string();
  const int s = run_tool("solve" + common);
  const int c = s == 0 ? run_tool("curve" + common) : -1;
  const int k = c == 0 ? run_tool("compare" + common) : -1;
  if (k < 0 || !fs::exists(dir / "compare.json")) {
    report(1, "spectral curve reproduction", false, fmt("pipeline exit codes solve=%d curve=%d compare=%d", s, c, k));
    return;
  }
  const auto j = nikishin::cli::read_json((dir / "compare.json").string());
  const double e2 = j["c2_relative_error"].get<double>();
  std::string per;
  for (const auto& v : j["variants"])
    per += fmt(" c0=%d:%.3g", v["c0"].get<int>(), v["c3_relative_error"].get<double>());
  const int within = j["variants_within_bound"].get<int>();
  bool documented = false;
  if (within == 1) {
    std::ifstream readme(std::string(SOURCE_DIR) + "/README.md");
    std::stringstream ss;
    ss << readme.rdbuf();
    documented = ss.str().find("adjudicated c0 = " + std::to_string(j["adjudicated_c0"].get<int>())) !=
                 std::string::npos;
  }
  report(1, "spectral curve reproduction", e2 <= 0.02 && within == 1 && documented,
         fmt("window [%.3f, %.3f], C2 err %.3g (<= 0.02), C3 err", j["window"][0].get<double>(),
             j["window"][1].get<double>(), e2) +
             per + fmt("; %d variant(s) within 0.05; README records it: %s", within, documented ? "yes" : "no"));
}

void criterion_2() {
  std::vector<double> worst;
  double dz_err = 0.0;
  for (int n : {400, 800, 1600}) {
    const Solution& s = solution(1.0, n);
    const CurveModel m = curve_model(s);
    double w = 0.0;
    for (double x : mid_support_points(s)) {
      const auto jr = jump_residual(m, x);
      w = std::max(w, jr.max_normalized());
      if (n == 800) {
        const int k = jr.component;  // Z_{k-1} and Z_k jump on support k
        for (int idx : {k - 1, k})
          dz_err = std::max(dz_err, std::abs(jr.dz[idx] - 2.0 * kPi * jr.density) / (2.0 * kPi * jr.density));
      }
    }
    worst.push_back(w);
  }
  const bool mono = worst[0] > worst[1] && worst[1] > worst[2];
  report(2, "jump cancellation", worst[1] <= 1e-2 && dz_err <= 0.02 && mono,
         fmt("max normalized jump n=400/800/1600: %.3g / %.3g / %.3g (n=800 <= 1e-2, decreasing); "
             "max | |dZ| - 2 pi rho | / 2 pi rho = %.3g (<= 0.02)",
             worst[0], worst[1], worst[2], dz_err));
}

void criterion_3() {
  const Solution& s = solution(1.0, 800);
  const CurveModel m = curve_model(s);
  double worst = 0.0;
  int samples = 0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -20.0 + 40.0 * (i + 0.37) / 2001.0;  // keeps clear of the pole
    for (Side side : {Side::upper, Side::lower}) {
      const auto z = z_functions(m, x, side);
      cplx sum = 0.0;
      for (const cplx& v : z.Z) sum += v;
      const auto c = curve_coefficients(z);
      worst = std::max({worst, std::abs(sum), std::abs(c[0])});
      ++samples;
    }
  }
  double csv_worst = -1.0;
  const fs::path bp = fs::path(TEST_SCRATCH) / "a1" / "branchpoints.json";
  if (fs::exists(bp)) csv_worst = nikishin::cli::read_json(bp.string())["c1_max_abs"].get<double>();
  report(3, "zero trace", worst <= 1e-10 && csv_worst >= 0.0 && csv_worst <= 1e-10,
         fmt("max |sum Z|, |C1| over %d samples = %.3g; curve.csv max |C1| = %.3g (<= 1e-10)", samples, worst,
             csv_worst));
}

void criterion_4() {
  bool ok = true;
  std::string detail;
  for (double a : {1.0, 2.0, 3.0}) {
    const Solution& s = solution(a, 800);
    const auto v = verify_variational(s.mu, s.sys, 1e-3);
    double on = 0.0, off = 0.0;
    for (const auto& c : v.components) {
      on = std::max(on, c.on_support / c.scale);
      off = std::max(off, c.off_support / c.scale);
    }
    ok = ok && v.pass;
    detail += fmt("a=%g on %.2g off %.2g; ", a, on, off);
  }
  report(4, "variational conditions", ok, detail + "(relative to scale_j, <= 1e-3)");
}

void criterion_5() {
  const auto d = l1_distance(solution(1.0, 800, 1).mu.weights, solution(1.0, 800, 2).mu.weights);
  report(5, "seed independence", d[0] <= 1e-4 && d[1] <= 1e-4,
         fmt("L1 distance seeds 1 vs 2: %.3g, %.3g (<= 1e-4)", d[0], d[1]));
}

void criterion_6() {
  bool ok = true;
  std::string detail;
  for (double a : {1.0, 2.0, 3.0}) {
    const Solution& s = solution(a, 800);
    const auto& sup = s.report.supports;
    const bool one = sup[0].size() == 1 && sup[1].size() == 1;
    const double gap = one ? std::min(sup[0][0].lo, -sup[1][0].hi) : 0.0;
    // grids are mirror images, so cell i of both components covers +/- the same radii
    const double mirror = (s.mu.weights[0] - s.mu.weights[1]).cwiseAbs().sum();
    ok = ok && one && gap > 0.0 && mirror <= 1e-3;
    detail += fmt("a=%g intervals %zu/%zu gap %.3g mirror L1 %.2g; ", a, sup[0].size(), sup[1].size(), gap, mirror);
  }
  report(6, "support structure", ok, detail);
}

void criterion_7() {
  const Solution& s = solution(1.0, 800);
  double worst = 0.0;
  for (int k = 0; k < 2; ++k) {
    const auto fr = solve_frozen(k, s.mu, s.sys, unit_masses());
    worst = std::max(worst, (fr.weights - s.mu.weights[k]).cwiseAbs().sum());
  }
  report(7, "frozen-neighbour fixed point", worst <= 1e-4, fmt("max L1 %.3g (<= 1e-4)", worst));
}

double fit(const ExampleParams& p, double edge, double dir) {
  std::vector<double> d, r;
  for (int i = 0; i < 61; ++i) {
    const double t = std::pow(10.0, -6.0 + 3.0 * i / 60.0);
    d.push_back(t);
    r.push_back(analytic_density(p, edge + dir * t));
  }
  return edge_exponent_fit(d, r).exponent;
}

void criterion_8() {
  const ExampleParams p1{1.0, 3}, p0{0.0, 3};
  const auto bp = analytic_branchpoints(p1);
  const double e_in = fit(p1, bp.x_in, 1.0), e_out = fit(p1, bp.x_out, -1.0);
  const double e0 = fit(p0, 0.0, 1.0);
  report(8, "edge exponents",
         std::abs(e_in - 0.5) <= 0.1 && std::abs(e_out - 0.5) <= 0.1 && std::abs(e0 + 2.0 / 3.0) <= 0.05,
         fmt("a=1 inner %.4f outer %.4f (0.5 +/- 0.1); a=0 origin %.4f (-2/3 +/- 0.05)", e_in, e_out, e0));
}

void criterion_9() {
  bool ok = true;
  std::string detail;
  for (double a : {9.0, 16.0, 25.0}) {
    const double r = analytic_branchpoints(ExampleParams{a, 3}).x_out / (a + 2.0 * std::sqrt(a));
    ok = ok && std::abs(r - 1.0) <= 0.15;
    detail += fmt("a=%g x_out/(a+2sqrt a)=%.3f; ", a, r);
  }
  double prev = 1e300;
  for (double a : {1.0, 0.5, 0.25, 0.1}) {
    const double x = analytic_branchpoints(ExampleParams{a, 3}).x_in;
    ok = ok && x < prev;
    prev = x;
    detail += fmt("x_in(%g)=%.3g ", a, x);
  }
  report(9, "branchpoint asymptotics", ok, detail);
}

void criterion_10() {
  double me = 0.0;
  const std::vector<std::pair<Cell, Cell>> cells{
      {{0.0, 1.0}, {0.0, 1.0}},     {{0.0, 0.3}, {0.3, 1.2}},     {{-0.5, -0.1}, {0.2, 0.4}},
      {{1.0, 1.1}, {1.75, 1.8}},    {{40.0, 41.0}, {-2.0, -1.5}}, {{1e-3, 2e-3}, {2e-3, 1.0}},
      {{-0.004, -0.001}, {0.001, 0.0079}}, {{3.0, 3.07}, {3.07, 3.14}}};
  for (const auto& [a, b] : cells) me = std::max(me, std::abs(mutual_energy(a, b) - oracle::mutual_energy(a, b)));

  auto cs = interlaced_conductors(2, 1e-2, 6.0);
  std::vector<double> q{1.0, 1.0}, bb{1.0, 1.0}, aa{1.0, 1.0};
  auto sys = assemble({build_grid(cs[0], 24, 1.0), build_grid(cs[1], 24, 1.0)}, build_nikishin_matrix(2, q),
                      half_line_potentials(cs, bb, aa));
  Weights w{Eigen::VectorXd::LinSpaced(24, 1.0, 2.0), Eigen::VectorXd::LinSpaced(24, 2.0, 0.5)};
  for (auto& v : w) v /= v.sum();
  const auto phi = effective_potential(sys, w);
  double fd_err = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 24; i += 5) {
      auto wp = w, wm = w;
      wp[j](i) += 1e-4;
      wm[j](i) -= 1e-4;
      const double fd = (energy(sys, wp) - energy(sys, wm)) / 2e-4;
      fd_err = std::max(fd_err, std::abs(fd - 2.0 * phi[j](i)) / std::abs(fd));
    }

  const Solution& s = solution(1.0, 800);
  double ff = 0.0;
  for (int j = 0; j < 2; ++j)
    for (cplx z : {cplx(1e6, 0.0), cplx(0.0, 1e6), cplx(-1e6, 0.0)})
      ff = std::max(ff, std::abs(z * resolvent(s.mu.grids[j], s.mu.weights[j], z) - s.mu.mass(j)) / s.mu.mass(j));

  report(10, "numerical infrastructure", me <= 1e-10 && fd_err <= 1e-6 && ff <= 1e-5,
         fmt("mutual_energy vs quadrature %.2g abs (<= 1e-10); 2 phi vs FD gradient %.2g rel (<= 1e-6); "
             "|z W - mass| at |z|=1e6 %.2g rel (<= 1e-5)",
             me, fd_err, ff));
}

void criterion_11() {
  const Solution& s = solution(1.0, 800);
  const CurveModel m = curve_model(s);
  CoefficientFn coef = [&](double x) { return curve_coefficients(m, x, Side::upper); };
  double worst = 0.0;
  std::string detail;
  for (int j = 0; j < 2; ++j) {
    const auto& iv = s.report.supports[j].front();
    const Grid& g = s.mu.grids[j];
    std::vector<double> xs;
    for (int i = 0; i < g.size(); ++i)
      if (g.center(i) > iv.lo && g.center(i) < iv.hi) xs.push_back(g.center(i));
    std::sort(xs.begin(), xs.end());
    const auto z0 = z_functions(m, xs.front(), Side::upper);
    const auto br = track_branches(xs, coef, {}, z0.Z);
    const auto dens = density_from_curve(br, j + 1, iv, m.scales()[j]);
    double l1 = 0.0, mass = 0.0, l1_closed = 0.0;
    for (const auto& d : dens) {
      const int i = g.locate(d.x);
      l1 += std::abs(d.density - s.mu.density(j, i)) * g.width(i);
      l1_closed += std::abs(d.density - analytic_density(ExampleParams{1.0, 3}, d.x)) * g.width(i);
      mass += s.mu.weights[j](i);
    }
    worst = std::max(worst, l1 / mass);
    // the closed form is an independent check, reported but not gated
    detail += fmt("component %d: %.3g (vs closed form %.3g); ", j + 1, l1 / mass, l1_closed / mass);
  }
  report(11, "density consistency", worst <= 0.02, detail + "(relative L1 <= 0.02)");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                    criterion_5, criterion_6, criterion_7, criterion_8,
                                                    criterion_9, criterion_10, criterion_11};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i) + 1, "exception", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}

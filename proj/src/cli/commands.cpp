#include "nikishin/cli/commands.hpp"

#include "nikishin/cli/io.hpp"
#include "nikishin/reference_r2.hpp"
#include "nikishin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>

namespace nikishin::cli {

namespace {

bool wants(const RunConfig& cfg, const std::string& format) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) !=
         cfg.output.formats.end();
}

json meta(const RunConfig& cfg) {
  json j;
  j["config"] = to_json(cfg);
  j["config_hash"] = config_hash(cfg);
  return j;
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

json report_json(const RunConfig& cfg, const SolveReport& rep, const std::vector<Conductor>& cond,
                 int doublings, const std::string& status) {
  json j = meta(cfg);
  j["status"] = status;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["energy"] = rep.energy;
  j["degenerate"] = rep.degenerate;
  j["doublings"] = doublings;
  j["conductors"] = json::array();
  for (const auto& c : cond)
    j["conductors"].push_back({{"index", c.index}, {"r_min", c.r_min}, {"r_max", c.r_max}});
  j["robin_constants"] = rep.robin_constants();
  j["components"] = json::array();
  for (std::size_t k = 0; k < rep.kkt.size(); ++k) {
    const auto& c = rep.kkt[k];
    json supp = json::array();
    if (k < rep.supports.size())
      for (const auto& iv : rep.supports[k]) supp.push_back(interval_json(iv));
    j["components"].push_back({{"index", k + 1},
                               {"excluded", c.excluded},
                               {"robin", c.robin},
                               {"support", supp},
                               {"support_cells", c.support_cells},
                               {"kkt_on_support", c.on_support},
                               {"kkt_off_support", c.off_support},
                               {"kkt_scale", c.scale},
                               {"kkt_pass", c.pass},
                               {"touches_inner_edge",
                                k < rep.touches_inner_edge.size() && rep.touches_inner_edge[k]}});
  }
  return j;
}

std::vector<std::vector<std::string>> density_rows(const VectorMeasure& mu) {
  std::vector<std::vector<std::string>> rows;
  for (int j = 0; j < mu.components(); ++j)
    for (int i = 0; i < mu.grids[j].size(); ++i)
      rows.push_back(density_fields({mu.grids[j].center(i), j + 1, mu.density(j, i), mu.weights[j](i)}));
  return rows;
}

json variational_json(const VariationalReport& v, double tol) {
  json j;
  j["tol"] = tol;
  j["pass"] = v.pass;
  j["components"] = json::array();
  for (std::size_t k = 0; k < v.components.size(); ++k) {
    const auto& c = v.components[k];
    const double s = c.scale > 0.0 ? c.scale : 1.0;
    j["components"].push_back({{"index", k + 1},
                               {"excluded", c.excluded},
                               {"robin", c.robin},
                               {"on_support_relative", c.on_support / s},
                               {"off_support_relative", c.off_support / s},
                               {"pass", c.pass}});
  }
  return j;
}

json calibration_json(const SignCalibration& cal) {
  return {{"sigma", cal.sigma},
          {"min_recovered_plus", cal.min_recovered[0]},
          {"min_recovered_minus", cal.min_recovered[1]},
          {"far_field_x", cal.far_field_x},
          {"far_field_z", complex_json(cal.far_field_z)}};
}

std::string failing_conditions(const AdmissibilityReport& rep) {
  std::string s;
  for (const auto& c : rep.conditions)
    if (c.verdict == Verdict::fail) s += (s.empty() ? "" : " ") + ("[" + c.name + "]");
  return s;
}

json admissibility_json(const AdmissibilityReport& rep) {
  json j;
  j["all_pass"] = rep.all_pass();
  j["any_fail"] = rep.any_fail();
  j["lower_bound_L"] = rep.lower_bound_L;
  j["fitted_c"] = rep.fitted_c;
  j["fitted_C"] = rep.fitted_C;
  j["q_lower_bounds"] = rep.q_lower_bounds;
  j["conditions"] = json::array();
  for (const auto& c : rep.conditions) {
    json w = json::array();
    for (const auto& x : c.witnesses)
      w.push_back({{"j", x.j}, {"k", x.k}, {"z", x.z}, {"t", x.t}, {"value", x.value}});
    j["conditions"].push_back(
        {{"name", "[" + c.name + "]"}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}, {"witnesses", w}});
  }
  return j;
}

struct Loaded {
  ProblemSpec problem;
  VectorMeasure mu;
  json report;
};

// Rebuilds the stored solution from report.json + densities.csv.
Loaded load_solution(const RunConfig& cfg, const std::string& dir) {
  const std::string rpath = path_in(dir, "report.json"), dpath = path_in(dir, "densities.csv");
  if (!std::filesystem::exists(rpath) || !std::filesystem::exists(dpath))
    throw ConfigError(dir, "missing solve artifacts (report.json, densities.csv); run solve first");
  Loaded L;
  L.report = read_json(rpath);
  const json current = to_json(cfg);
  if (!L.report.contains("config") || L.report["config"]["problem"] != current["problem"] ||
      L.report["config"]["discretization"] != current["discretization"])
    throw ConfigError(rpath, "artifacts were produced for a different problem or discretization");
  L.problem = make_problem(cfg);
  const json& cond = L.report.at("conductors");
  if (cond.size() != L.problem.conductors.size())
    throw ConfigError(rpath, "conductor count does not match the configuration");
  for (std::size_t j = 0; j < cond.size(); ++j)
    L.problem.conductors[j] = make_conductor(cond[j].at("index").get<int>(),
                                             cond[j].at("r_min").get<double>(),
                                             cond[j].at("r_max").get<double>());
  std::vector<Grid> grids;
  for (const auto& c : L.problem.conductors)
    grids.push_back(build_grid(c, cfg.discretization.n, cfg.discretization.ratio));
  L.mu = zero_measure(grids);
  const CsvTable t = read_csv(dpath);
  const int cc = t.column("component"), cw = t.column("weight");
  std::vector<int> filled(grids.size(), 0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int comp = static_cast<int>(t.number(r, cc));
    if (comp < 1 || comp > static_cast<int>(grids.size()))
      throw ConfigError(dpath, "row " + std::to_string(r + 1) + ": component out of range");
    int& i = filled[comp - 1];
    if (i >= grids[comp - 1].size()) throw ConfigError(dpath, "too many cells for component " + std::to_string(comp));
    L.mu.weights[comp - 1](i++) = t.number(r, cw);
  }
  for (std::size_t j = 0; j < grids.size(); ++j)
    if (filled[j] != grids[j].size())
      throw ConfigError(dpath, "component " + std::to_string(j + 1) + " has " +
                                   std::to_string(filled[j]) + " cells, expected " +
                                   std::to_string(grids[j].size()));
  return L;
}

// Sub-windows of `w` with a gap of `gap` around every pole.
std::vector<Interval> split_at_poles(const Interval& w, const std::vector<double>& poles, double gap,
                                     json& gaps) {
  std::vector<Interval> out{w};
  for (double p : poles) {
    std::vector<Interval> next;
    for (const Interval& iv : out) {
      if (p + gap <= iv.lo || p - gap >= iv.hi) {
        next.push_back(iv);
        continue;
      }
      gaps.push_back({{"pole", p}, {"excluded", json::array({p - gap, p + gap})}});
      if (p - gap > iv.lo) next.push_back({iv.lo, p - gap});
      if (p + gap < iv.hi) next.push_back({p + gap, iv.hi});
    }
    out = std::move(next);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

json branchpoint_json(const BranchPoint& b) {
  return {{"x", b.x}, {"bracket", json::array({b.lo, b.hi})}, {"sign_change", b.sign_change},
          {"multiplicity", b.multiplicity}};
}

// Sweep, track and emit one side of one sub-window.
void sweep_rows(const std::vector<double>& xs, const CoefficientFn& coef, std::span<const cplx> initial,
                const std::string& side, std::vector<std::vector<std::string>>& rows, json& events,
                json& errors) {
  BranchPaths paths;
  try {
    paths = track_branches(xs, coef, {}, initial);
  } catch (const BranchCollision& e) {
    errors.push_back({{"side", side}, {"bracket", json::array({e.lo(), e.hi()})}, {"what", e.what()}});
    paths.x = xs;
    for (double x : xs) paths.roots.push_back(monic_roots(coef(x)));
  }
  for (const auto& ev : paths.events)
    events.push_back({{"side", side}, {"bracket", json::array({ev.lo, ev.hi})}, {"paths", json::array({ev.path_a, ev.path_b})}});
  for (std::size_t i = 0; i < paths.x.size(); ++i)
    rows.push_back(curve_fields({paths.x[i], side, coef(paths.x[i]), paths.roots[i]}));
}

int report_config_error(const std::exception& e) {
  std::cerr << "config error: " << e.what() << '\n';
  return kConfigError;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
  ProblemSpec problem;
  try {
    problem = make_problem(cfg);
  } catch (const std::invalid_argument& e) {
    return report_config_error(e);
  }
  ensure_directory(out_dir);
  json admissibility;
  if (cfg.problem.strict_admissibility) {
    const auto adm = check_admissibility(problem.potentials, problem.conductors, problem.A, cfg.problem.probes);
    admissibility = admissibility_json(adm);
    if (adm.any_fail()) {
      std::cerr << "config error: problem.strict_admissibility: admissibility probe failed "
                << failing_conditions(adm) << '\n';
      return kConfigError;
    }
  }
  const SolveConfig scfg = make_solve_config(cfg);
  Solution sol;
  try {
    sol = solve_problem(problem, make_grid_spec(cfg), scfg, cfg.discretization.max_doublings);
  } catch (const NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    if (wants(cfg, "csv")) write_csv(path_in(out_dir, "densities.csv"), density_header(), density_rows(e.best()));
    if (wants(cfg, "json")) {
      std::vector<Conductor> cond = problem.conductors;
      for (std::size_t j = 0; j < cond.size(); ++j) cond[j].r_max = e.best().grids[j].edges.back();
      write_json(path_in(out_dir, "report.json"), report_json(cfg, e.report(), cond, 0, "non_convergence"));
    }
    return kNonConvergence;
  } catch (const WindowExhausted& e) {
    std::cerr << "window exhausted: " << e.what() << '\n';
    if (wants(cfg, "json")) {
      json j = meta(cfg);
      j["status"] = "window_exhausted";
      j["message"] = e.what();
      write_json(path_in(out_dir, "report.json"), j);
    }
    return kWindowExhausted;
  } catch (const std::invalid_argument& e) {
    return report_config_error(e);
  }

  json rep = report_json(cfg, sol.report, sol.conductors, sol.doublings, "converged");
  const auto var = verify_variational(sol.mu, sol.sys, cfg.solver.verify_tol, cfg.solver.support_tol);
  rep["variational"] = variational_json(var, cfg.solver.verify_tol);
  if (!admissibility.is_null()) rep["admissibility"] = admissibility;
  if (cfg.spectral.enabled) {
    try {
      CurveModel model(sol.mu, problem.potentials, problem.A, make_spectral_options(cfg));
      rep["sign_calibration"] = calibration_json(calibrate_sign(model));
    } catch (const ConventionFailure& e) {
      rep["sign_calibration"] = {{"error", e.what()}};
    }
  }
  if (wants(cfg, "csv")) write_csv(path_in(out_dir, "densities.csv"), density_header(), density_rows(sol.mu));
  if (wants(cfg, "json")) write_json(path_in(out_dir, "report.json"), rep);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& out_dir) {
  Loaded L;
  try {
    L = load_solution(cfg, out_dir);
  } catch (const ConfigError& e) {
    return report_config_error(e);
  }
  const KernelSystem sys = assemble(L.mu.grids, L.problem.A, L.problem.potentials);
  json j = meta(cfg);
  std::vector<double> masses;
  for (const auto& c : cfg.problem.components) masses.push_back(c.mass);
  try {
    validate_measure(L.mu, masses);
  } catch (const std::invalid_argument& e) {
    // CSV weights round-trip exactly, so this flags edited artifacts
    j["measure_error"] = e.what();
  }
  VariationalReport var;
  try {
    var = verify_variational(L.mu, sys, cfg.solver.verify_tol, cfg.solver.support_tol);
  } catch (const InvalidState& e) {
    std::cerr << "verify: " << e.what() << '\n';
    j["error"] = e.what();
    write_json(path_in(out_dir, "verify.json"), j);
    return kNonConvergence;
  }
  j["energy"] = energy(sys, L.mu);
  j["variational"] = variational_json(var, cfg.solver.verify_tol);
  const auto supp = support_intervals(L.mu, cfg.solver.support_tol);
  j["supports"] = json::array();
  for (const auto& s : supp) {
    json a = json::array();
    for (const auto& iv : s) a.push_back(interval_json(iv));
    j["supports"].push_back(a);
  }
  write_json(path_in(out_dir, "verify.json"), j);
  const bool ok = var.pass && !j.contains("measure_error");
  if (!ok) std::cerr << "verify: variational conditions fail at tol " << cfg.solver.verify_tol << '\n';
  return ok ? kOk : kNonConvergence;
}

int cmd_curve(const RunConfig& cfg, const std::string& out_dir) {
  Loaded L;
  try {
    L = load_solution(cfg, out_dir);
  } catch (const ConfigError& e) {
    return report_config_error(e);
  }
  CurveModel model(L.mu, L.problem.potentials, L.problem.A, make_spectral_options(cfg));
  json out = meta(cfg);
  try {
    out["sign_calibration"] = calibration_json(calibrate_sign(model));
  } catch (const ConventionFailure& e) {
    std::cerr << "curve: " << e.what() << '\n';
    out["sign_calibration"] = {{"error", e.what()}};
    write_json(path_in(out_dir, "branchpoints.json"), out);
    return kNonConvergence;
  }
  const int R = model.components();
  const auto supports = support_intervals(L.mu, cfg.solver.support_tol);

  std::vector<Interval> windows = cfg.spectral.windows;
  double widest = 0.0, reach = 0.0;
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < L.mu.grids[j].size(); ++i)
      if (L.mu.density(j, i) > cfg.solver.support_tol) {
        widest = std::max(widest, L.mu.grids[j].width(i));
        reach = std::max(reach, L.mu.grids[j].edges[i + 1]);
      }
  if (windows.empty()) {
    const double X = reach + cfg.spectral.sweep_margin;
    windows.push_back({-X, X});
  }
  json gaps = json::array();
  std::vector<Interval> subs;
  for (const auto& w : windows)
    for (const auto& s : split_at_poles(w, model.poles(), cfg.spectral.pole_gap, gaps)) subs.push_back(s);

  std::vector<std::vector<std::string>> rows;
  json events = json::array(), errors = json::array(), bps = json::array(), windows_json = json::array();
  double c1_max = 0.0;
  int count = 0;
  for (const auto& s : subs) {
    windows_json.push_back(interval_json(s));
    const auto xs = linspace(s.lo, s.hi, cfg.spectral.sweep_points);
    for (Side side : {Side::upper, Side::lower}) {
      auto coef = [&](double x) { return curve_coefficients(model, x, side); };
      const ZFunctions z0 = z_functions(model, xs.front(), side);
      sweep_rows(xs, coef, z0.Z, to_string(side), rows, events, errors);
      for (double x : xs) c1_max = std::max(c1_max, std::abs(coef(x)[0]));
    }
    DiscriminantOptions dopt;
    dopt.scan_points = cfg.spectral.scan_points;
    dopt.bisect_tol = cfg.spectral.bisect_tol;
    dopt.tangency_tol = cfg.spectral.tangency_tol;
    dopt.merge_distance = cfg.spectral.merge_cells * widest;
    const auto set = discriminant_zeros([&](double x) { return curve_coefficients(model, x, Side::upper); },
                                        s.lo, s.hi, dopt);
    for (const auto& b : set.points) {
      bps.push_back(branchpoint_json(b));
      ++count;
    }
  }

  json jumps = json::array();
  double jmax = 0.0;
  for (int j = 0; j < R; ++j)
    for (const auto& iv : supports[j]) {
      json probes = json::array();
      const Grid& g = L.mu.grids[j];
      for (int p = 0; p < cfg.spectral.jump_points; ++p) {
        double x = iv.lo + (iv.hi - iv.lo) * (p + 1.0) / (cfg.spectral.jump_points + 1.0);
        const int cell = g.locate(x);
        if (cell >= 0) x = g.center(cell);
        const JumpResidual jr = jump_residual(model, x);
        jmax = std::max(jmax, jr.max_normalized());
        probes.push_back({{"x", x},
                          {"normalized", jr.normalized},
                          {"raw", jr.raw},
                          {"dz", jr.dz},
                          {"two_pi_density", 2.0 * std::numbers::pi * jr.density * model.scales()[j]}});
      }
      jumps.push_back({{"component", j + 1}, {"support", interval_json(iv)}, {"probes", probes}});
    }

  out["windows"] = windows_json;
  out["pole_gaps"] = gaps;
  out["branchpoints"] = bps;
  out["branchpoint_count"] = count;
  out["merge_distance"] = cfg.spectral.merge_cells * widest;
  out["jump_residuals"] = jumps;
  out["max_normalized_jump_residual"] = jmax;
  out["c1_max_abs"] = c1_max;
  out["sheet_exchanges"] = events;
  out["tracking_errors"] = errors;
  if (wants(cfg, "csv")) write_csv(path_in(out_dir, "curve.csv"), curve_header(R + 1), rows);
  if (wants(cfg, "json")) write_json(path_in(out_dir, "branchpoints.json"), out);
  return kOk;
}

int cmd_compare(const RunConfig& cfg, const std::string& out_dir, std::optional<double> a_opt,
                std::optional<int> variant, std::optional<std::string> curve) {
  try {
    const std::optional<double> a = a_opt ? a_opt : example_strength(cfg);
    if (!a) throw ConfigError("--a", "required: the configured problem is not the closed-form family");
    if (!(*a > 0.0)) throw ConfigError("--a", "far-field comparison needs a > 0");
    if (variant && *variant != 3 && *variant != 6) throw ConfigError("--variant", "must be 3 or 6");
    std::vector<int> variants = variant ? std::vector<int>{*variant} : std::vector<int>{3, 6};

    const std::string cpath = curve.value_or(path_in(out_dir, "curve.csv"));
    if (!std::filesystem::exists(cpath)) throw ConfigError(cpath, "missing curve samples; run curve first");
    const CsvTable t = read_csv(cpath);
    const int cx = t.column("x"), cs = t.column("side"), c2 = t.column("C2_re"), c3 = t.column("C3_re");

    // analytic supports of every candidate, and the numeric ones when available
    std::vector<Interval> busy;
    double x_out = 0.0;
    for (int v : std::vector<int>{3, 6}) {
      const auto bp = analytic_branchpoints({*a, v});
      x_out = std::max(x_out, bp.x_out);
      busy.push_back({bp.x_in, bp.x_out});
      busy.push_back({-bp.x_out, -bp.x_in});
    }
    const std::string rpath = path_in(out_dir, "report.json");
    if (!curve && std::filesystem::exists(rpath)) {
      const json rep = read_json(rpath);
      if (rep.contains("components"))
        for (const auto& c : rep["components"])
          for (const auto& iv : c["support"]) busy.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
    const Interval win = cfg.spectral.compare_window.value_or(Interval{x_out + 1.0, x_out + 10.0});
    for (const auto& iv : busy)
      if (win.lo < iv.hi && iv.lo < win.hi)
        throw ConfigError("spectral.compare_window", "window [" + fmt(win.lo) + ", " + fmt(win.hi) +
                                                         "] overlaps the support [" + fmt(iv.lo) + ", " +
                                                         fmt(iv.hi) + "]");

    double num2 = 0.0, den2 = 0.0;
    std::vector<double> num3(variants.size(), 0.0), den3(variants.size(), 0.0);
    int samples = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (t.rows[r][static_cast<std::size_t>(cs)] != "+") continue;
      const double x = t.number(r, cx);
      if (x < win.lo || x > win.hi) continue;
      ++samples;
      const double C2 = t.number(r, c2), C3 = t.number(r, c3);
      for (std::size_t v = 0; v < variants.size(); ++v) {
        const auto ref = analytic_coefficients({*a, variants[v]}, x);
        if (v == 0) {
          num2 = std::max(num2, std::abs(C2 + ref.R));
          den2 = std::max(den2, std::abs(ref.R));
        }
        num3[v] = std::max(num3[v], std::abs(C3 + ref.D));
        den3[v] = std::max(den3[v], std::abs(ref.D));
      }
    }
    if (samples < 5)
      throw ConfigError(cpath, "only " + std::to_string(samples) + " samples inside the compare window");

    json j = meta(cfg);
    j["a"] = *a;
    j["curve"] = cpath;
    j["window"] = interval_json(win);
    j["samples"] = samples;
    j["metric"] = "max |numeric - analytic| / max |analytic| over the window";
    const double err2 = num2 / den2;
    j["c2_relative_error"] = err2;
    j["c2_bound"] = cfg.spectral.compare_bound_c2;
    j["c3_bound"] = cfg.spectral.compare_bound;
    json per = json::array();
    std::size_t best = 0;
    int within = 0;
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const double e = num3[v] / den3[v];
      const bool ok = e <= cfg.spectral.compare_bound;
      within += ok ? 1 : 0;
      per.push_back({{"c0", variants[v]}, {"c3_relative_error", e}, {"within_bound", ok}});
      if (e < num3[best] / den3[best]) best = v;
    }
    j["variants"] = per;
    j["adjudicated_c0"] = variants[best];
    j["variants_within_bound"] = within;
    const double best_err = num3[best] / den3[best];
    const bool pass = err2 <= cfg.spectral.compare_bound_c2 && best_err <= cfg.spectral.compare_bound;
    j["pass"] = pass;
    ensure_directory(out_dir);
    write_json(path_in(out_dir, "compare.json"), j);
    if (!pass) std::cerr << "compare: best error above the configured bound\n";
    return pass ? kOk : kNonConvergence;
  } catch (const ConfigError& e) {
    return report_config_error(e);
  }
}

int cmd_example(const RunConfig& cfg, const std::string& out_dir, double a, int variant) {
  const ExampleParams p{a, variant};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    return report_config_error(e);
  }
  ensure_directory(out_dir);
  const AnalyticBranchpoints bp = analytic_branchpoints(p);
  const double lo = bp.x_in, hi = bp.x_out;

  // densities on both supports, clustered towards the endpoints
  std::vector<std::vector<std::string>> drows;
  const int M = 2001;
  std::vector<double> xs(M);
  for (int i = 0; i < M; ++i) {
    const double t = static_cast<double>(i) / (M - 1);
    xs[i] = lo + (hi - lo) * 0.5 * (1.0 - std::cos(std::numbers::pi * t));
  }
  if (a == 0.0) xs.front() = 1e-12 * hi;  // the density is unbounded at the origin
  for (int comp : {1, 2}) {
    const double s = comp == 1 ? 1.0 : -1.0;
    for (int i = 0; i < M; ++i) {
      const double left = i > 0 ? xs[i] - xs[i - 1] : 0.0;
      const double right = i + 1 < M ? xs[i + 1] - xs[i] : 0.0;
      const double rho = analytic_density(p, xs[i]);
      drows.push_back(density_fields({s * xs[i], comp, rho, 0.5 * (left + right) * rho}));
    }
  }

  // curve on [-X, -gap] and [gap, X]; analytic coefficients are real, so both
  // sides carry the same values
  const double X = hi + cfg.spectral.sweep_margin;
  json gaps = json::array();
  const auto subs = split_at_poles({-X, X}, {0.0}, cfg.spectral.pole_gap, gaps);
  std::vector<std::vector<std::string>> crows;
  json events = json::array(), errors = json::array();
  auto coef = [&](double x) { return analytic_curve(p, x); };
  for (const auto& s : subs) {
    const auto sx = linspace(s.lo, s.hi, cfg.spectral.sweep_points);
    for (const std::string side : {"+", "-"}) sweep_rows(sx, coef, {}, side, crows, events, errors);
  }

  json bj = meta(cfg);
  bj["a"] = a;
  bj["c0"] = variant;
  bj["points"] = bp.points;
  bj["x_in"] = bp.x_in;
  bj["x_out"] = bp.x_out;
  bj["mass"] = analytic_mass(p, a == 0.0 ? 0.0 : lo, hi);
  if (bp.triple)
    bj["triple_point"] = {{"x", bp.triple->x},
                          {"monodromy_cycles", bp.triple->cycles},
                          {"reciprocal_multiplicity", bp.triple->reciprocal_multiplicity},
                          {"reciprocal_sign_change", bp.triple->sign_change}};
  bj["pole_gaps"] = gaps;
  bj["sheet_exchanges"] = events;
  bj["tracking_errors"] = errors;

  json ej = meta(cfg);
  ej["a"] = a;
  ej["c0"] = variant;
  auto fit_json = [&](const std::string& where, const std::function<double(double)>& at) {
    std::vector<double> d, r;
    for (int i = 0; i <= 60; ++i) {
      const double dist = std::pow(10.0, -6.0 + 3.0 * i / 60.0);
      d.push_back(dist);
      r.push_back(analytic_density(p, at(dist)));
    }
    const ExponentFit f = edge_exponent_fit(d, r);
    return json{{"where", where},
                {"distance_range", json::array({1e-6, 1e-3})},
                {"exponent", f.exponent},
                {"stderr", f.stderr_},
                {"samples", f.samples}};
  };
  ej["fits"] = json::array();
  if (a > 0.0) {
    ej["fits"].push_back(fit_json("inner_edge", [&](double d) { return lo + d; }));
    ej["fits"].push_back(fit_json("outer_edge", [&](double d) { return hi - d; }));
  } else {
    ej["fits"].push_back(fit_json("origin", [&](double d) { return d; }));
    ej["fits"].push_back(fit_json("outer_edge", [&](double d) { return hi - d; }));
  }

  if (wants(cfg, "csv")) {
    write_csv(path_in(out_dir, "densities.csv"), density_header(), drows);
    write_csv(path_in(out_dir, "curve.csv"), curve_header(3), crows);
  }
  if (wants(cfg, "json")) {
    write_json(path_in(out_dir, "branchpoints.json"), bj);
    write_json(path_in(out_dir, "exponents.json"), ej);
  }
  return kOk;
}

int cmd_admissibility(const RunConfig& cfg, const std::string& out_dir) {
  ProblemSpec problem;
  try {
    problem = make_problem(cfg);
  } catch (const std::invalid_argument& e) {
    return report_config_error(e);
  }
  const auto adm = check_admissibility(problem.potentials, problem.conductors, problem.A, cfg.problem.probes);
  json j = meta(cfg);
  j["admissibility"] = admissibility_json(adm);
  ensure_directory(out_dir);
  write_json(path_in(out_dir, "admissibility.json"), j);
  if (adm.any_fail()) std::cerr << "admissibility: failing " << failing_conditions(adm) << '\n';
  return kOk;
}

}  // namespace nikishin::cli

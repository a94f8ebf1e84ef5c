#include "nikishin/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nikishin::cli {

namespace {

// Reads fields of one JSON object and rejects whatever was not read.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return obj_.contains(k); }

  const json* get(const std::string& k) {
    seen_.insert(k);
    auto it = obj_.find(k);
    return it == obj_.end() ? nullptr : &*it;
  }

  template <class T>
  void read(const std::string& k, T& out) {
    const json* v = get(k);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw ConfigError(key(k), "expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v->is_number_integer()) throw ConfigError(key(k), "expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v->is_number()) throw ConfigError(key(k), "expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v->is_string()) throw ConfigError(key(k), "expected a string");
      }
      out = v->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(key(k), e.what());
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

Interval read_interval(const json& v, const std::string& key) {
  require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(), key,
          "expected [lo, hi]");
  Interval iv{v[0].get<double>(), v[1].get<double>()};
  require(iv.lo < iv.hi, key, "lo must be below hi");
  return iv;
}

}  // namespace

RunConfig parse_config(const json& root) {
  RunConfig cfg;
  Reader top(root, "");

  if (const json* p = top.get("problem")) {
    Reader r(*p, "problem");
    r.read("R", cfg.problem.R);
    require(cfg.problem.R >= 1 && cfg.problem.R <= 8, "problem.R", "must be in 1..8");
    if (const json* q = r.get("q")) {
      require(q->is_array(), "problem.q", "expected an array");
      for (const auto& v : *q) {
        require(v.is_number(), "problem.q", "entries must be numbers");
        cfg.problem.q.push_back(v.get<double>());
      }
    }
    if (const json* cs = r.get("components")) {
      require(cs->is_array(), "problem.components", "expected an array");
      for (std::size_t i = 0; i < cs->size(); ++i) {
        const std::string k = "problem.components[" + std::to_string(i) + "]";
        Reader c((*cs)[i], k);
        ComponentParams cp;
        c.read("b", cp.b);
        c.read("a", cp.a);
        c.read("mass", cp.mass);
        c.finish();
        require(cp.b > 0.0, k + ".b", "must be > 0");
        require(cp.a >= 0.0, k + ".a", "must be >= 0");
        require(cp.mass >= 0.0, k + ".mass", "must be >= 0");
        cfg.problem.components.push_back(cp);
      }
    }
    r.read("strict_admissibility", cfg.problem.strict_admissibility);
    if (const json* a = r.get("admissibility")) {
      Reader ar(*a, "problem.admissibility");
      ar.read("decades_to_zero", cfg.problem.probes.decades_to_zero);
      ar.read("decades_to_infinity", cfg.problem.probes.decades_to_infinity);
      ar.read("points_per_decade", cfg.problem.probes.points_per_decade);
      ar.read("trend_tolerance", cfg.problem.probes.trend_tolerance);
      ar.finish();
      require(cfg.problem.probes.points_per_decade >= 1, "problem.admissibility.points_per_decade",
              "must be >= 1");
    }
    r.finish();
  }
  const int R = cfg.problem.R;
  if (cfg.problem.q.empty()) cfg.problem.q.assign(R, 1.0);
  require(static_cast<int>(cfg.problem.q.size()) == R, "problem.q", "needs exactly R entries");
  for (double v : cfg.problem.q) require(v > 0.0, "problem.q", "entries must be > 0");
  if (cfg.problem.components.empty()) cfg.problem.components.assign(R, ComponentParams{});
  require(static_cast<int>(cfg.problem.components.size()) == R, "problem.components",
          "needs exactly R entries");

  if (const json* d = top.get("discretization")) {
    Reader r(*d, "discretization");
    r.read("n", cfg.discretization.n);
    r.read("ratio", cfg.discretization.ratio);
    r.read("r_min", cfg.discretization.r_min);
    if (const json* rm = r.get("r_max"); rm && !rm->is_null()) {
      require(rm->is_number(), "discretization.r_max", "expected a number or null");
      cfg.discretization.r_max = rm->get<double>();
    }
    r.read("margin", cfg.discretization.margin);
    r.read("max_doublings", cfg.discretization.max_doublings);
    r.finish();
  }
  {
    const auto& d = cfg.discretization;
    require(d.n >= kMinCells, "discretization.n",
            "n=" + std::to_string(d.n) + " is below the minimum of " + std::to_string(kMinCells) +
                " cells per conductor");
    require(d.ratio >= 1.0, "discretization.ratio", "must be >= 1");
    require(d.r_min > 0.0, "discretization.r_min", "must be > 0");
    if (d.r_max) require(*d.r_max > d.r_min, "discretization.r_max", "must exceed r_min");
    require(d.margin > 0.0, "discretization.margin", "must be > 0");
    require(d.max_doublings >= 0, "discretization.max_doublings", "must be >= 0");
  }

  if (const json* s = top.get("solver")) {
    Reader r(*s, "solver");
    r.read("kkt_tol", cfg.solver.kkt_tol);
    r.read("support_tol", cfg.solver.support_tol);
    r.read("max_iterations", cfg.solver.max_iterations);
    if (const json* seed = r.get("seed")) {
      require(seed->is_number_unsigned(), "solver.seed", "expected a nonnegative integer");
      cfg.solver.seed = seed->get<std::uint64_t>();
    }
    r.read("random_init", cfg.solver.random_init);
    r.read("verify_tol", cfg.solver.verify_tol);
    r.finish();
  }
  require(cfg.solver.kkt_tol > 0.0, "solver.kkt_tol", "must be > 0");
  require(cfg.solver.support_tol > 0.0, "solver.support_tol", "must be > 0");
  require(cfg.solver.max_iterations >= 1, "solver.max_iterations", "must be >= 1");
  require(cfg.solver.verify_tol > 0.0, "solver.verify_tol", "must be > 0");

  if (const json* s = top.get("spectral")) {
    Reader r(*s, "spectral");
    auto& sp = cfg.spectral;
    r.read("enabled", sp.enabled);
    r.read("eps_rel", sp.eps_rel);
    r.read("richardson", sp.richardson);
    if (const json* w = r.get("windows")) {
      require(w->is_array(), "spectral.windows", "expected an array of [lo, hi]");
      for (std::size_t i = 0; i < w->size(); ++i)
        sp.windows.push_back(read_interval((*w)[i], "spectral.windows[" + std::to_string(i) + "]"));
    }
    r.read("sweep_margin", sp.sweep_margin);
    r.read("pole_gap", sp.pole_gap);
    r.read("sweep_points", sp.sweep_points);
    r.read("scan_points", sp.scan_points);
    r.read("bisect_tol", sp.bisect_tol);
    r.read("tangency_tol", sp.tangency_tol);
    r.read("merge_cells", sp.merge_cells);
    r.read("jump_points", sp.jump_points);
    r.read("compare_bound", sp.compare_bound);
    r.read("compare_bound_c2", sp.compare_bound_c2);
    if (const json* cw = r.get("compare_window"); cw && !cw->is_null())
      sp.compare_window = read_interval(*cw, "spectral.compare_window");
    r.finish();
  }
  {
    const auto& sp = cfg.spectral;
    require(sp.eps_rel > 0.0, "spectral.eps_rel", "must be > 0");
    require(sp.sweep_margin > 0.0, "spectral.sweep_margin", "must be > 0");
    require(sp.pole_gap > 0.0, "spectral.pole_gap", "must be > 0");
    require(sp.sweep_points >= 3, "spectral.sweep_points", "must be >= 3");
    require(sp.scan_points >= 3, "spectral.scan_points", "must be >= 3");
    require(sp.bisect_tol > 0.0, "spectral.bisect_tol", "must be > 0");
    require(sp.tangency_tol > 0.0, "spectral.tangency_tol", "must be > 0");
    require(sp.merge_cells >= 0.0, "spectral.merge_cells", "must be >= 0");
    require(sp.jump_points >= 1, "spectral.jump_points", "must be >= 1");
    require(sp.compare_bound > 0.0, "spectral.compare_bound", "must be > 0");
    require(sp.compare_bound_c2 > 0.0, "spectral.compare_bound_c2", "must be > 0");
  }

  if (const json* o = top.get("output")) {
    Reader r(*o, "output");
    r.read("directory", cfg.output.directory);
    if (const json* f = r.get("formats")) {
      require(f->is_array(), "output.formats", "expected an array");
      cfg.output.formats.clear();
      for (const auto& v : *f) {
        require(v.is_string() && (v == "csv" || v == "json"), "output.formats",
                "entries must be \"csv\" or \"json\"");
        cfg.output.formats.push_back(v.get<std::string>());
      }
    }
    r.finish();
  }
  top.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("parse error: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  auto& p = j["problem"];
  p["R"] = cfg.problem.R;
  p["q"] = cfg.problem.q;
  p["components"] = json::array();
  for (const auto& c : cfg.problem.components)
    p["components"].push_back({{"b", c.b}, {"a", c.a}, {"mass", c.mass}});
  p["strict_admissibility"] = cfg.problem.strict_admissibility;
  p["admissibility"] = {{"decades_to_zero", cfg.problem.probes.decades_to_zero},
                        {"decades_to_infinity", cfg.problem.probes.decades_to_infinity},
                        {"points_per_decade", cfg.problem.probes.points_per_decade},
                        {"trend_tolerance", cfg.problem.probes.trend_tolerance}};
  const auto& d = cfg.discretization;
  j["discretization"] = {{"n", d.n},
                         {"ratio", d.ratio},
                         {"r_min", d.r_min},
                         {"r_max", d.r_max ? json(*d.r_max) : json(nullptr)},
                         {"margin", d.margin},
                         {"max_doublings", d.max_doublings}};
  const auto& s = cfg.solver;
  j["solver"] = {{"kkt_tol", s.kkt_tol},         {"support_tol", s.support_tol},
                 {"max_iterations", s.max_iterations}, {"seed", s.seed},
                 {"random_init", s.random_init}, {"verify_tol", s.verify_tol}};
  const auto& sp = cfg.spectral;
  json windows = json::array();
  for (const auto& w : sp.windows) windows.push_back({w.lo, w.hi});
  j["spectral"] = {{"enabled", sp.enabled},
                   {"eps_rel", sp.eps_rel},
                   {"richardson", sp.richardson},
                   {"windows", windows},
                   {"sweep_margin", sp.sweep_margin},
                   {"pole_gap", sp.pole_gap},
                   {"sweep_points", sp.sweep_points},
                   {"scan_points", sp.scan_points},
                   {"bisect_tol", sp.bisect_tol},
                   {"tangency_tol", sp.tangency_tol},
                   {"merge_cells", sp.merge_cells},
                   {"jump_points", sp.jump_points},
                   {"compare_bound", sp.compare_bound},
                   {"compare_bound_c2", sp.compare_bound_c2},
                   {"compare_window", sp.compare_window
                                          ? json::array({sp.compare_window->lo, sp.compare_window->hi})
                                          : json(nullptr)}};
  j["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ProblemSpec make_problem(const RunConfig& cfg) {
  const int R = cfg.problem.R;
  ProblemSpec p;
  p.A = build_nikishin_matrix(R, cfg.problem.q);
  const double r_max0 = cfg.discretization.r_max.value_or(1.0);
  const auto cond = interlaced_conductors(R, cfg.discretization.r_min,
                                          std::max(r_max0, 2.0 * cfg.discretization.r_min));
  std::vector<double> b, a;
  for (const auto& c : cfg.problem.components) {
    b.push_back(c.b);
    a.push_back(c.a);
  }
  p.potentials = half_line_potentials(cond, b, a);
  if (cfg.discretization.r_max) {
    p.conductors = cond;
  } else {
    p.conductors = default_conductors(p.potentials, cfg.discretization.r_min, cfg.discretization.margin);
  }
  return p;
}

SolveConfig make_solve_config(const RunConfig& cfg) {
  SolveConfig s;
  for (const auto& c : cfg.problem.components) s.masses.push_back(c.mass);
  s.kkt_tol = cfg.solver.kkt_tol;
  s.support_tol = cfg.solver.support_tol;
  s.max_iterations = cfg.solver.max_iterations;
  s.seed = cfg.solver.seed;
  s.random_init = cfg.solver.random_init;
  return s;
}

GridSpec make_grid_spec(const RunConfig& cfg) {
  return GridSpec{cfg.discretization.n, cfg.discretization.ratio};
}

SpectralOptions make_spectral_options(const RunConfig& cfg) {
  SpectralOptions o;
  o.eps_rel = cfg.spectral.eps_rel;
  o.richardson = cfg.spectral.richardson;
  o.support_tol = cfg.solver.support_tol;
  return o;
}

std::optional<double> example_strength(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  if (p.R != 2) return std::nullopt;
  for (double q : p.q)
    if (q != 1.0) return std::nullopt;
  for (const auto& c : p.components)
    if (c.b != 1.0 || c.mass != 1.0 || c.a != p.components[0].a) return std::nullopt;
  return p.components[0].a;
}

}  // namespace nikishin::cli

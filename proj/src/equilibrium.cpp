#include "nikishin/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace nikishin {

namespace {

inline std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double inner(const Weights& a, const Weights& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += kernels::dot(view(a[j]), view(b[j]));
  return s;
}

void check_config(const KernelSystem& sys, const SolveConfig& cfg) {
  if (static_cast<int>(cfg.masses.size()) != sys.components())
    throw std::invalid_argument("solve: one mass per component required");
  for (double m : cfg.masses)
    if (!(m >= 0.0)) throw std::invalid_argument("solve: masses must be nonnegative");
  if (!(cfg.kkt_tol > 0.0)) throw std::invalid_argument("solve: kkt tolerance must be > 0");
  if (!(cfg.support_tol > 0.0)) throw std::invalid_argument("solve: support tolerance must be > 0");
  if (cfg.max_iterations < 1) throw std::invalid_argument("solve: max_iterations must be >= 1");
  if (!(cfg.armijo_shrink > 0.0 && cfg.armijo_shrink < 1.0) || !(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0))
    throw std::invalid_argument("solve: Armijo parameters out of range");
}

Weights initial_weights(const KernelSystem& sys, const SolveConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> expo(1.0);
  Weights w(sys.components());
  for (int j = 0; j < sys.components(); ++j) {
    const int n = sys.grids[j].size();
    w[j] = Eigen::VectorXd::Zero(n);
    if (cfg.masses[j] == 0.0) continue;
    for (int i = 0; i < n; ++i) w[j](i) = cfg.random_init ? expo(rng) : 1.0;
    w[j] *= cfg.masses[j] / w[j].sum();
  }
  return w;
}

bool flat_potential(const Weights& phi, const std::vector<ComponentKkt>& kkt, double tol) {
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (kkt[j].excluded) continue;
    if (phi[j].maxCoeff() - phi[j].minCoeff() > tol * std::max(kkt[j].scale, 1e-300)) return false;
  }
  return true;
}

SolveReport make_report(const KernelSystem& sys, const VectorMeasure& mu, const Weights& phi,
                        const SolveConfig& cfg, double e, int iterations, bool converged) {
  SolveReport rep;
  rep.energy = e;
  rep.kkt = kkt_residuals(sys, mu.weights, phi, cfg.support_tol, cfg.kkt_tol);
  rep.supports = support_intervals(mu, cfg.support_tol);
  rep.iterations = iterations;
  rep.converged = converged;
  for (int j = 0; j < mu.components(); ++j)
    rep.touches_inner_edge.push_back(mu.density(j, 0) > cfg.support_tol);
  return rep;
}

}  // namespace

std::vector<double> SolveReport::robin_constants() const {
  std::vector<double> out;
  for (const auto& k : kkt) out.push_back(k.robin);
  return out;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& u, double mass) {
  const Eigen::Index n = u.size();
  if (mass <= 0.0) return Eigen::VectorXd::Zero(n);
  std::vector<double> s(u.data(), u.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cum += s[i];
    const double t = (cum - mass) / static_cast<double>(i + 1);
    if (s[i] - t > 0.0) theta = t;
  }
  Eigen::VectorXd w = (u.array() - theta).max(0.0).matrix();
  // remove the rounding drift of the threshold so the mass is exact
  const double total = w.sum();
  if (total > 0.0) w *= mass / total;
  return w;
}

std::vector<ComponentKkt> kkt_residuals(const KernelSystem& sys, const Weights& w,
                                        const Weights& phi, double support_tol, double tol) {
  std::vector<ComponentKkt> out(sys.components());
  for (int j = 0; j < sys.components(); ++j) {
    ComponentKkt& c = out[j];
    const Grid& g = sys.grids[j];
    c.scale = phi[j].cwiseAbs().maxCoeff();
    const double mass = w[j].sum();
    if (mass == 0.0) {
      c.excluded = true;
      c.pass = true;
      continue;
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      if (w[j](i) > support_tol * g.width(i)) {
        num += w[j](i) * phi[j](i);
        den += w[j](i);
        ++c.support_cells;
      }
    }
    if (c.support_cells == 0) continue;
    c.robin = num / den;
    for (int i = 0; i < g.size(); ++i) {
      const double dev = phi[j](i) - c.robin;
      if (w[j](i) > support_tol * g.width(i)) c.on_support = std::max(c.on_support, std::abs(dev));
      else c.off_support = std::max(c.off_support, -dev);
    }
    const double bound = tol * c.scale;
    c.pass = c.on_support <= bound && c.off_support <= bound;
  }
  return out;
}

std::pair<VectorMeasure, SolveReport> solve(const KernelSystem& sys, const SolveConfig& cfg) {
  check_config(sys, cfg);
  return solve_from(sys, cfg, initial_weights(sys, cfg));
}

std::pair<VectorMeasure, SolveReport> solve_from(const KernelSystem& sys, const SolveConfig& cfg,
                                                 Weights start) {
  check_config(sys, cfg);
  const int R = sys.components();
  VectorMeasure mu;
  mu.grids = sys.grids;
  mu.weights = std::move(start);
  validate_measure(mu, cfg.masses);

  Weights& w = mu.weights;
  Weights g = field(sys, w);
  auto potential_from = [&](const Weights& gg) {
    Weights phi = gg;
    for (int j = 0; j < R; ++j) phi[j] += sys.potential[j];
    return phi;
  };
  auto energy_from = [&](const Weights& gg) {
    double e = 0.0;
    for (int j = 0; j < R; ++j)
      e += kernels::dot(view(w[j]), view(gg[j])) + 2.0 * kernels::dot(view(w[j]), view(sys.potential[j]));
    return e;
  };
  Weights phi = potential_from(g);
  double e = energy_from(g);

  double step = 0.0;
  for (int j = 0; j < R; ++j) step = std::max(step, phi[j].cwiseAbs().maxCoeff());
  step = 1.0 / std::max(2.0 * step, 1e-300);

  std::vector<double> trace;
  if (cfg.record_energy) trace.push_back(e);

  int it = 0;
  bool converged = false, degenerate = false;
  Weights d(R);
  for (; it < cfg.max_iterations; ++it) {
    const auto kkt = kkt_residuals(sys, w, phi, cfg.support_tol, cfg.kkt_tol);
    if (std::all_of(kkt.begin(), kkt.end(), [](const ComponentKkt& c) { return c.pass; })) {
      converged = true;
      break;
    }
    if (flat_potential(phi, kkt, cfg.kkt_tol)) {
      converged = degenerate = true;
      break;
    }

    double slope = 0.0;  // directional derivative of the energy along d
    for (int j = 0; j < R; ++j) {
      if (cfg.masses[j] == 0.0) {
        d[j] = Eigen::VectorXd::Zero(w[j].size());
        continue;
      }
      d[j] = project_simplex(w[j] - 2.0 * step * phi[j], cfg.masses[j]) - w[j];
      slope += 2.0 * kernels::dot(view(phi[j]), view(d[j]));
    }
    if (!(slope < 0.0)) {
      // no descent direction left at this step: stationary to rounding
      converged = std::all_of(kkt.begin(), kkt.end(), [&](const ComponentKkt& c) {
        return c.excluded || (c.on_support <= 1e3 * cfg.kkt_tol * c.scale &&
                              c.off_support <= 1e3 * cfg.kkt_tol * c.scale);
      });
      break;
    }
    const Weights kd = field(sys, d);
    const double curvature = inner(d, kd);
    double lambda = 1.0;
    double e_new = e + slope + curvature;
    while (e_new > e + cfg.armijo_c * lambda * slope && lambda > 1e-20) {
      lambda *= cfg.armijo_shrink;
      e_new = e + lambda * slope + lambda * lambda * curvature;
    }
    for (int j = 0; j < R; ++j) {
      w[j] += lambda * d[j];
      w[j] = w[j].cwiseMax(0.0);
      g[j] += lambda * kd[j];
    }
    if ((it + 1) % 200 == 0) {
      g = field(sys, w);
      e_new = std::min(e_new, energy_from(g));
    }
    phi = potential_from(g);
    e = e_new;
    if (cfg.record_energy) trace.push_back(e);

    // BB1 step from s = lambda d, y = 2 lambda K d
    const double dd = inner(d, d);
    if (curvature > 0.0) step = std::clamp(dd / (2.0 * curvature), cfg.step_min, cfg.step_max);
    else step = cfg.step_max;
  }

  g = field(sys, w);
  phi = potential_from(g);
  e = energy_from(g);
  SolveReport rep = make_report(sys, mu, phi, cfg, e, it, converged);
  rep.degenerate = degenerate;
  if (degenerate) {
    for (int j = 0; j < R; ++j) {
      if (cfg.masses[j] == 0.0) continue;
      const Grid& gr = sys.grids[j];
      const Cell a = gr.cell(0), b = gr.cell(gr.size() - 1);
      rep.supports[j] = {Interval{std::min(a.lo, b.lo), std::max(a.hi, b.hi)}};
    }
  }
  rep.energy_trace = std::move(trace);
  if (!converged) {
    std::ostringstream os;
    os << "solve: no convergence after " << it << " iterations; KKT residuals:";
    for (std::size_t j = 0; j < rep.kkt.size(); ++j)
      os << " [" << j + 1 << "] on=" << rep.kkt[j].on_support << " off=" << rep.kkt[j].off_support;
    throw NonConvergence(os.str(), mu, rep);
  }
  if (!degenerate) {
    for (int j = 0; j < R; ++j) {
      const int last = sys.grids[j].size() - 1;
      if (cfg.masses[j] > 0.0 && mu.density(j, last) > cfg.support_tol) {
        std::ostringstream os;
        os << "solve: support of component " << j + 1
           << " touches r_max; re-run with a doubled window";
        throw WindowTooSmall(os.str(), j, mu, rep);
      }
    }
  }
  return {std::move(mu), std::move(rep)};
}

VariationalReport verify_variational(const VectorMeasure& mu, const KernelSystem& sys, double tol,
                                     double support_tol) {
  if (mu.components() != sys.components())
    throw std::invalid_argument("verify_variational: component count mismatch");
  const Weights phi = effective_potential(sys, mu);
  VariationalReport rep;
  rep.components = kkt_residuals(sys, mu.weights, phi, support_tol, tol);
  for (int j = 0; j < mu.components(); ++j) {
    const auto& c = rep.components[j];
    if (!c.excluded && c.support_cells == 0) {
      std::ostringstream os;
      os << "verify_variational: component " << j + 1 << " has positive mass but empty support";
      throw InvalidState(os.str());
    }
  }
  rep.pass = std::all_of(rep.components.begin(), rep.components.end(),
                         [](const ComponentKkt& c) { return c.pass; });
  return rep;
}

std::vector<std::vector<Interval>> support_intervals(const VectorMeasure& mu, double support_tol) {
  std::vector<std::vector<Interval>> out(mu.components());
  for (int j = 0; j < mu.components(); ++j) {
    const Grid& g = mu.grids[j];
    int i = 0;
    while (i < g.size()) {
      if (!(mu.density(j, i) > support_tol)) {
        ++i;
        continue;
      }
      int end = i;
      while (end + 1 < g.size() && mu.density(j, end + 1) > support_tol) ++end;
      const Cell a = g.cell(i), b = g.cell(end);
      out[j].push_back({std::min(a.lo, b.lo), std::max(a.hi, b.hi)});
      i = end + 1;
    }
    std::sort(out[j].begin(), out[j].end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  }
  return out;
}

KernelSystem frozen_system(int k, const VectorMeasure& mu, const KernelSystem& sys) {
  const int R = sys.components();
  if (k < 0 || k >= R) throw std::invalid_argument("solve_frozen: component index out of range");
  if (mu.components() != R) throw std::invalid_argument("solve_frozen: component count mismatch");
  KernelSystem one;
  one.A = InteractionMatrix(Eigen::MatrixXd::Constant(1, 1, sys.A(k, k)));
  one.grids = {sys.grids[k]};
  Eigen::VectorXd v = sys.potential[k];
  std::span<double> out(v.data(), static_cast<std::size_t>(v.size()));
  for (int l = 0; l < R; ++l) {
    if (l == k || !sys.has_block(k, l)) continue;
    kernels::gemv_add(sys.block(k, l), view(mu.weights[l]), sys.A(k, l), out);
  }
  one.potential = {std::move(v)};
  one.blocks_ = {sys.block(k, k)};
  return one;
}

FrozenResult solve_frozen(int k, const VectorMeasure& mu, const KernelSystem& sys,
                          const SolveConfig& cfg) {
  const KernelSystem one = frozen_system(k, mu, sys);
  SolveConfig c = cfg;
  c.masses = {cfg.masses.at(static_cast<std::size_t>(k))};
  auto [m, rep] = solve(one, c);
  return {std::move(m.weights[0]), std::move(rep)};
}

std::vector<Conductor> default_conductors(std::span<const PotentialSpec> potentials, double r_min,
                                          double margin) {
  std::vector<Conductor> out;
  for (std::size_t j = 0; j < potentials.size(); ++j) {
    const double r_max = std::max(window_for_margin(potentials[j], margin), 2.0 * r_min);
    out.push_back(make_conductor(static_cast<int>(j) + 1, r_min, r_max));
  }
  return out;
}

Solution solve_problem(const ProblemSpec& problem, const GridSpec& grid, const SolveConfig& cfg,
                       int max_doublings) {
  const auto pd = check_positive_definite(problem.A);
  if (!pd.positive_definite)
    throw std::invalid_argument("solve: interaction matrix is not positive definite");
  std::vector<Conductor> conductors = problem.conductors;
  for (int attempt = 0;; ++attempt) {
    std::vector<Grid> grids;
    for (const auto& c : conductors) grids.push_back(build_grid(c, grid.n, grid.ratio));
    KernelSystem sys = assemble(std::move(grids), problem.A, problem.potentials);
    try {
      auto [mu, rep] = solve(sys, cfg);
      return Solution{conductors, std::move(sys), std::move(mu), std::move(rep), attempt};
    } catch (const WindowTooSmall&) {
      if (attempt >= max_doublings) {
        std::ostringstream os;
        os << "solve: support still touches r_max after " << max_doublings << " window doublings";
        throw WindowExhausted(os.str());
      }
      for (auto& c : conductors) c.r_max *= 2.0;
    }
  }
}

}  // namespace nikishin

#include "nikishin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nikishin {

namespace {

constexpr double kPi = std::numbers::pi;

// ln(1 + d) without cancellation for small |d|; principal branch.
cplx clog1p(cplx d) {
  if (std::abs(d) < 0.5) {
    const double re = 0.5 * std::log1p(2.0 * d.real() + std::norm(d));
    const double im = std::atan2(d.imag(), 1.0 + d.real());
    return {re, im};
  }
  return std::log(1.0 + d);
}

double min_gap(std::span<const cplx> r) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = a + 1; b < r.size(); ++b) g = std::min(g, std::abs(r[a] - r[b]));
  return g;
}

double max_abs(std::span<const cplx> r) {
  double m = 0.0;
  for (const cplx& z : r) m = std::max(m, std::abs(z));
  return m;
}

struct Matching {
  std::vector<cplx> ordered;  // ordered[b] continues old path b
  double max_shift = 0.0;
};

// Minimal total displacement assignment; exhaustive for n <= 7, greedy above.
Matching match_roots(std::span<const cplx> old, std::span<const cplx> cand) {
  const int n = static_cast<int>(old.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  if (n <= 7) {
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (int b = 0; b < n && cost < best_cost; ++b) cost += std::abs(cand[perm[b]] - old[b]);
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<bool> used(n, false);
    for (int b = 0; b < n; ++b) {
      int arg = -1;
      double d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < n; ++c)
        if (!used[c] && std::abs(cand[c] - old[b]) < d) {
          d = std::abs(cand[c] - old[b]);
          arg = c;
        }
      used[arg] = true;
      best[b] = arg;
    }
  }
  Matching m;
  m.ordered.resize(n);
  for (int b = 0; b < n; ++b) {
    m.ordered[b] = cand[best[b]];
    m.max_shift = std::max(m.max_shift, std::abs(m.ordered[b] - old[b]));
  }
  return m;
}

std::vector<cplx> roots_of(const std::vector<cplx>& c) { return monic_roots(c); }

}  // namespace

std::string to_string(Side s) { return s == Side::upper ? "+" : "-"; }

cplx resolvent(const Grid& grid, const Eigen::VectorXd& weights, cplx z) {
  cplx sum = 0.0;
  const bool on_axis = z.imag() == 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double w = weights(i);
    if (w == 0.0) continue;
    const Cell c = grid.cell(i);
    const double rho = w / c.width();
    if (on_axis) {
      const double x = z.real();
      const double dl = x - c.lo, dh = x - c.hi;
      if (dl == 0.0 || dh == 0.0) {
        // finite part at an edge
        if (dl != 0.0) sum += rho * std::log(std::abs(dl));
        if (dh != 0.0) sum -= rho * std::log(std::abs(dh));
        continue;
      }
      sum += rho * std::log(std::abs(dl / dh));
    } else {
      // (z - lo)/(z - hi) = 1 + h/(z - hi)
      const cplx zh = z - c.hi;
      const cplx d = c.width() / zh;
      if (std::abs(d) < 0.5) {
        sum += rho * clog1p(d);
      } else {
        // off the axis both arguments share a half-plane, so the difference
        // is the principal log of the ratio
        sum += rho * (std::log(z - c.lo) - std::log(zh));
      }
    }
  }
  return sum;
}

CurveModel::CurveModel(VectorMeasure mu, std::vector<PotentialSpec> potentials,
                       const InteractionMatrix& A, SpectralOptions options)
    : mu_(std::move(mu)), potentials_(std::move(potentials)), opt_(options) {
  const int R = mu_.components();
  if (R < 1) throw std::invalid_argument("CurveModel: empty measure");
  if (A.size() != R || static_cast<int>(potentials_.size()) != R)
    throw std::invalid_argument("CurveModel: measure, potentials and A disagree in size");
  auto q = nikishin_scales(A);
  if (!q) throw std::invalid_argument("CurveModel: interaction matrix is not of Nikishin type");
  q_ = *q;
  if (!(opt_.eps_rel > 0.0)) throw std::invalid_argument("CurveModel: eps_rel must be positive");
  Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(R, R);
  for (int j = 0; j < R; ++j) {
    unit(j, j) = 2.0;
    if (j + 1 < R) unit(j, j + 1) = unit(j + 1, j) = -1.0;
  }
  unit_.compute(unit);
  for (const auto& V : potentials_)
    for (double p : V.poles()) poles_.push_back(p);
  std::sort(poles_.begin(), poles_.end());
  poles_.erase(std::unique(poles_.begin(), poles_.end()), poles_.end());
}

void CurveModel::set_sigma(int sigma) {
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
  sigma_ = sigma;
}

double CurveModel::epsilon(double x) const {
  double w = std::numeric_limits<double>::infinity();
  for (const Grid& g : mu_.grids) {
    const double r = g.sign * x;
    auto it = std::upper_bound(g.edges.begin(), g.edges.end(), r);
    int i = static_cast<int>(it - g.edges.begin()) - 1;
    i = std::clamp(i, 0, g.size() - 1);
    w = std::min(w, g.width(i));
  }
  return opt_.eps_rel * w;
}

cplx CurveModel::boundary_resolvent(int j, double x, Side side) const {
  const double eps = side_sign(side) * epsilon(x);
  const Grid& g = mu_.grids[j];
  const Eigen::VectorXd& w = mu_.weights[j];
  const cplx w1 = resolvent(g, w, cplx(x, eps));
  if (!opt_.richardson) return w1;
  const cplx w2 = resolvent(g, w, cplx(x, 0.5 * eps));
  return 2.0 * w2 - w1;
}

int CurveModel::support_component(double x) const {
  for (int j = 0; j < components(); ++j) {
    const int i = mu_.grids[j].locate(x);
    if (i >= 0 && mu_.density(j, i) > opt_.support_tol) return j;
  }
  return -1;
}

ZFunctions z_functions(const CurveModel& model, double x, Side side, int sigma) {
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
  const double eps = model.epsilon(x);
  for (double p : model.poles_)
    if (std::abs(x - p) <= eps) {
      std::ostringstream os;
      os << "evaluation point " << x << " within " << eps << " of the pole " << p;
      throw PoleProximity(os.str(), p);
    }
  const int R = model.components();
  ZFunctions out;
  out.x = x;
  out.side = side;
  out.sigma = sigma;
  out.W.resize(R);
  Eigen::VectorXd vp(R);
  for (int j = 0; j < R; ++j) {
    out.W[j] = model.boundary_resolvent(j, x, side);
    vp(j) = model.potentials_[j].derivative(x) / model.q_[j];
  }
  const Eigen::VectorXd c = model.unit_.solve(vp);
  out.Y.resize(R);
  for (int j = 0; j < R; ++j) {
    const double d = ((j + 1) % 2 == 1) ? -1.0 : 1.0;  // (-1)^(j+1), 0-based j
    out.Y[j] = static_cast<double>(sigma) * d * (model.q_[j] * out.W[j] - c(j));
  }
  out.Z.assign(R + 1, cplx(0.0));
  out.Z[0] = out.Y[0];
  for (int k = 1; k <= R - 1; ++k) out.Z[k] = (k % 2 == 0 ? 1.0 : -1.0) * (out.Y[k - 1] + out.Y[k]);
  out.Z[R] = (R % 2 == 0 ? 1.0 : -1.0) * out.Y[R - 1];
  return out;
}

ZFunctions z_functions(const CurveModel& model, double x, Side side) {
  return z_functions(model, x, side, model.sigma());
}

SignCalibration calibrate_sign(CurveModel& model, double tol) {
  const int R = model.components();
  const VectorMeasure& mu = model.measure();
  // probe every supported cell centre
  std::vector<std::pair<int, double>> probes;
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < mu.grids[j].size(); ++i)
      if (mu.density(j, i) > model.options().support_tol) probes.emplace_back(j, mu.grids[j].center(i));
  if (probes.empty()) throw ConventionFailure("calibrate_sign: no supported cells");

  SignCalibration cal;
  bool ok[2] = {false, false};
  for (int s = 0; s < 2; ++s) {
    const int sigma = s == 0 ? 1 : -1;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (auto [j, x] : probes) {
      bool skip = false;
      for (double p : model.poles())
        if (std::abs(x - p) <= model.epsilon(x)) skip = true;
      if (skip) continue;
      const ZFunctions zp = z_functions(model, x, Side::upper, sigma);
      const ZFunctions zm = z_functions(model, x, Side::lower, sigma);
      const double rec = (zp.Z[j] - zm.Z[j]).imag() / (2.0 * kPi * model.scales()[j]);
      lo = std::min(lo, rec);
      hi = std::max(hi, std::abs(rec));
    }
    cal.min_recovered[s] = lo;
    cal.max_recovered[s] = hi;
    ok[s] = hi > 0.0 && lo >= -tol * hi;
  }
  if (ok[0] == ok[1]) {
    std::ostringstream os;
    os << "calibrate_sign: recovered densities are "
       << (ok[0] ? "nonnegative for both signs" : "of mixed sign for both signs")
       << " (min " << cal.min_recovered[0] << " / " << cal.min_recovered[1] << ")";
    throw ConventionFailure(os.str());
  }
  cal.sigma = ok[0] ? 1 : -1;
  model.set_sigma(cal.sigma);

  // far-field probe beyond every window, on the side of the first conductor
  double far = 1.0;
  for (const Grid& g : mu.grids) far = std::max(far, g.edges.back());
  cal.far_field_x = 20.0 * far;
  const ZFunctions zf = z_functions(model, cal.far_field_x, Side::upper);
  cal.far_field_z = zf.Z;
  return cal;
}

std::vector<cplx> curve_coefficients(const ZFunctions& z) {
  const std::vector<cplx> e = elementary_symmetric(z.Z);
  std::vector<cplx> c(e.size() - 1);
  for (std::size_t k = 1; k < e.size(); ++k) c[k - 1] = (k % 2 == 0 ? 1.0 : -1.0) * e[k];
  return c;
}

std::vector<cplx> curve_coefficients(const CurveModel& model, double x, Side side) {
  return curve_coefficients(z_functions(model, x, side));
}

double JumpResidual::max_normalized() const {
  double m = 0.0;
  for (double v : normalized) m = std::max(m, v);
  return m;
}

JumpResidual jump_residual(const CurveModel& model, double x) {
  const int comp = model.support_component(x);
  if (comp < 0) {
    std::ostringstream os;
    os << "jump_residual: x = " << x << " lies off every support";
    throw std::invalid_argument(os.str());
  }
  const ZFunctions zp = z_functions(model, x, Side::upper);
  const ZFunctions zm = z_functions(model, x, Side::lower);
  const auto cp = curve_coefficients(zp);
  const auto cm = curve_coefficients(zm);
  JumpResidual out;
  out.x = x;
  out.component = comp + 1;
  out.density = model.measure().density(comp, model.measure().grids[comp].locate(x));
  double dz_sum = 0.0, M = 0.0;
  for (std::size_t j = 0; j < zp.Z.size(); ++j) {
    out.dz.push_back(std::abs(zp.Z[j] - zm.Z[j]));
    dz_sum += out.dz.back();
    M = std::max({M, std::abs(zp.Z[j]), std::abs(zm.Z[j])});
  }
  for (std::size_t k = 0; k < cp.size(); ++k) {
    const double raw = std::abs(cp[k] - cm[k]);
    out.raw.push_back(raw);
    const double scale = dz_sum * std::pow(M, static_cast<double>(k));
    out.normalized.push_back(scale > 0.0 ? raw / scale : 0.0);
  }
  return out;
}

BranchPaths track_branches(std::span<const double> xs, const CoefficientFn& coefficients,
                           const TrackOptions& options, std::span<const cplx> initial) {
  BranchPaths out;
  if (xs.empty()) return out;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] != xs[i - 1])) throw std::invalid_argument("track_branches: repeated sweep point");
  const double extent = std::max(std::abs(xs.back() - xs.front()), 1e-300);
  const double floor_step = options.min_step * extent;

  std::vector<cplx> current = roots_of(coefficients(xs.front()));
  if (!initial.empty()) {
    if (initial.size() != current.size())
      throw std::invalid_argument("track_branches: initial labels have the wrong size");
    current = match_roots(initial, current).ordered;
  }
  out.x.push_back(xs.front());
  out.roots.push_back(current);

  // advance the labelled set from x0 to x1, bisecting while ambiguous
  std::function<std::vector<cplx>(double, const std::vector<cplx>&, double, int)> advance =
      [&](double x0, const std::vector<cplx>& r0, double x1, int depth) -> std::vector<cplx> {
    const std::vector<cplx> cand = roots_of(coefficients(x1));
    Matching m = match_roots(r0, cand);
    const double gap = std::min(min_gap(r0), min_gap(m.ordered));
    if (m.max_shift < 0.5 * gap) return m.ordered;
    if (std::abs(x1 - x0) > floor_step && depth < options.max_depth) {
      const double xm = 0.5 * (x0 + x1);
      const std::vector<cplx> rm = advance(x0, r0, xm, depth + 1);
      return advance(xm, rm, x1, depth + 1);
    }
    const double size = 1.0 + std::max(max_abs(r0), max_abs(m.ordered));
    if (gap <= options.collision_tol * size) {
      // coalescing pair: record the exchange and accept the minimal matching
      int a = 0, b = 1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < m.ordered.size(); ++p)
        for (std::size_t s = p + 1; s < m.ordered.size(); ++s) {
          const double d = std::min(std::abs(r0[p] - r0[s]), std::abs(m.ordered[p] - m.ordered[s]));
          if (d < best) {
            best = d;
            a = static_cast<int>(p);
            b = static_cast<int>(s);
          }
        }
      const bool same = !out.events.empty() && out.events.back().path_a == a &&
                        out.events.back().path_b == b &&
                        std::abs(out.events.back().hi - std::min(x0, x1)) <= 2.0 * floor_step;
      if (same) {
        out.events.back().hi = std::max(x0, x1);
      } else {
        out.events.push_back({std::min(x0, x1), std::max(x0, x1), a, b});
      }
      return m.ordered;
    }
    std::ostringstream os;
    os << "track_branches: ambiguous matching on [" << std::min(x0, x1) << ", " << std::max(x0, x1)
       << "] (shift " << m.max_shift << ", gap " << gap << ")";
    throw BranchCollision(os.str(), std::min(x0, x1), std::max(x0, x1));
  };

  for (std::size_t i = 1; i < xs.size(); ++i) {
    current = advance(xs[i - 1], current, xs[i], 0);
    out.x.push_back(xs[i]);
    out.roots.push_back(current);
  }
  return out;
}

double curve_discriminant(std::span<const cplx> coefficients, Chart chart) {
  std::vector<double> c(coefficients.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coefficients[k].real();
  const double d = sylvester_discriminant(c);
  if (chart == Chart::affine) return d;
  const int n = static_cast<int>(c.size());
  return d / std::pow(c.back(), 2.0 * (n - 1));
}

namespace {

int estimate_multiplicity(const std::function<double(double)>& disc, double x0, double delta) {
  const double d1 = std::abs(disc(x0 + delta)) + std::abs(disc(x0 - delta));
  const double d2 = std::abs(disc(x0 + 2.0 * delta)) + std::abs(disc(x0 - 2.0 * delta));
  if (!(d1 > 0.0) || !(d2 > 0.0)) return 1;
  const double slope = std::log2(d2 / d1);
  return std::max(1, static_cast<int>(std::lround(slope)));
}

}  // namespace

BranchPointSet discriminant_zeros(const CoefficientFn& coefficients, double lo, double hi,
                                  const DiscriminantOptions& options) {
  if (!(lo < hi)) throw std::invalid_argument("discriminant_zeros: empty window");
  if (options.scan_points < 3) throw std::invalid_argument("discriminant_zeros: scan_points < 3");
  if (options.chart == Chart::affine)
    for (double p : options.poles)
      if (p >= lo && p <= hi) {
        std::ostringstream os;
        os << "discriminant_zeros: window [" << lo << ", " << hi << "] contains the pole " << p;
        throw std::invalid_argument(os.str());
      }
  if (options.log_spacing && !(lo > 0.0 || hi < 0.0))
    throw std::invalid_argument("discriminant_zeros: log spacing needs a window off 0");

  auto disc = [&](double x) { return curve_discriminant(coefficients(x), options.chart); };
  // scale-free size prod |z_i - z_j|^2 / max|z|^(n(n-1)) in the affine chart;
  // in the reciprocal chart coalescence happens at w = 0, so the scan maximum
  // is the reference instead
  double scan_max = 0.0;
  auto relative = [&](double x, double d) {
    if (options.chart == Chart::reciprocal) return scan_max > 0.0 ? std::abs(d) / scan_max : 0.0;
    const std::vector<cplx> c = coefficients(x);
    const int n = static_cast<int>(c.size());
    const double m = max_abs(monic_roots(c));
    return m > 0.0 ? std::abs(d) / std::pow(m, n * (n - 1)) : std::abs(d);
  };

  const int N = options.scan_points;
  std::vector<double> xs(N), ds(N);
  for (int i = 0; i < N; ++i) {
    const double t = static_cast<double>(i) / (N - 1);
    if (options.log_spacing) {
      const double a = std::log(std::abs(lo)), b = std::log(std::abs(hi));
      xs[i] = lo > 0.0 ? std::exp(a + t * (b - a)) : -std::exp(a + t * (b - a));
    } else {
      xs[i] = lo + t * (hi - lo);
    }
  }
  if (options.log_spacing && lo < 0.0) std::reverse(xs.begin(), xs.end());
  // keep the scan off exact pole locations in the reciprocal chart
  for (double& x : xs)
    for (double p : options.poles)
      if (x == p) x += 1e-9 * (hi - lo) / N;
  for (int i = 0; i < N; ++i) {
    ds[i] = disc(xs[i]);
    if (std::isfinite(ds[i])) scan_max = std::max(scan_max, std::abs(ds[i]));
  }

  std::vector<BranchPoint> crossings;
  const double mult_delta = 1e-3 * (hi - lo) / N;
  for (int i = 0; i + 1 < N; ++i) {
    if (ds[i] == 0.0) {
      crossings.push_back({xs[i], xs[i], xs[i], true, estimate_multiplicity(disc, xs[i], mult_delta)});
      continue;
    }
    if (std::signbit(ds[i]) != std::signbit(ds[i + 1]) && ds[i + 1] != 0.0) {
      double a = xs[i], b = xs[i + 1], fa = ds[i];
      while (b - a > options.bisect_tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = disc(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (std::signbit(fm) == std::signbit(fa)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double x = 0.5 * (a + b);
      int mult = estimate_multiplicity(disc, x, mult_delta);
      if (mult % 2 == 0) mult += 1;  // a sign change means odd order
      crossings.push_back({x, xs[i], xs[i + 1], true, mult});
    }
  }

  BranchPointSet out;
  // clusters of crossings closer than merge_distance: an odd count is one
  // crossing, an even count cancels
  for (std::size_t i = 0; i < crossings.size();) {
    std::size_t j = i + 1;
    while (j < crossings.size() && crossings[j].x - crossings[j - 1].x < options.merge_distance) ++j;
    const std::size_t count = j - i;
    if (count % 2 == 1) {
      BranchPoint b = crossings[i + count / 2];
      b.lo = crossings[i].lo;
      b.hi = crossings[j - 1].hi;
      out.points.push_back(b);
    }
    i = j;
  }

  auto near_crossing = [&](double x) {
    for (const BranchPoint& b : crossings)
      if (std::abs(b.x - x) < std::max(options.merge_distance, options.bisect_tol)) return true;
    return false;
  };
  // local minima of |disc| without a sign change
  for (int i = 1; i + 1 < N; ++i) {
    if (ds[i] == 0.0) continue;
    const double a = std::abs(ds[i]);
    if (!(a <= std::abs(ds[i - 1]) && a <= std::abs(ds[i + 1]))) continue;
    if (std::signbit(ds[i - 1]) != std::signbit(ds[i + 1])) continue;
    if (std::signbit(ds[i - 1]) != std::signbit(ds[i])) continue;
    // golden-section refinement on |disc|
    double l = xs[i - 1], r = xs[i + 1];
    if (l > r) std::swap(l, r);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = r - g * (r - l), d = l + g * (r - l);
    while (r - l > options.bisect_tol) {
      if (std::abs(disc(c)) < std::abs(disc(d))) r = d; else l = c;
      c = r - g * (r - l);
      d = l + g * (r - l);
      if (!(c > l && d < r)) break;
    }
    const double x = 0.5 * (l + r);
    const double dx = disc(x);
    if (!(relative(x, dx) < options.tangency_tol) || near_crossing(x)) continue;
    int mult = estimate_multiplicity(disc, x, std::max(mult_delta, 1e3 * options.bisect_tol));
    if (mult % 2 == 1) mult += 1;  // no sign change means even order
    out.points.push_back({x, std::min(xs[i - 1], xs[i + 1]), std::max(xs[i - 1], xs[i + 1]), false, mult});
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const BranchPoint& p, const BranchPoint& q) { return p.x < q.x; });
  return out;
}

std::vector<DensitySample> density_from_curve(const BranchPaths& branches, int j, Interval support,
                                              double scale, double imag_tol) {
  if (j < 1 || j >= branches.paths())
    throw std::invalid_argument("density_from_curve: component index out of range");
  if (!(scale > 0.0)) throw std::invalid_argument("density_from_curve: scale must be positive");
  std::vector<DensitySample> out;
  bool any_pair = false;
  for (std::size_t i = 0; i < branches.x.size(); ++i) {
    const double x = branches.x[i];
    if (x < support.lo || x > support.hi) continue;
    const cplx a = branches.roots[i][j - 1];
    const cplx b = branches.roots[i][j];
    const double tol = imag_tol * (1.0 + std::abs(a) + std::abs(b));
    double rho = 0.0;
    if (std::abs(a.imag()) > tol && std::abs(b.imag()) > tol &&
        std::signbit(a.imag()) != std::signbit(b.imag())) {
      rho = 0.5 * (std::abs(a.imag()) + std::abs(b.imag())) / (kPi * scale);
      any_pair = true;
    }
    out.push_back({x, rho});
  }
  if (!any_pair) {
    std::ostringstream os;
    os << "density_from_curve: paths " << j - 1 << ", " << j
       << " carry no conjugate pair on [" << support.lo << ", " << support.hi << "]";
    throw CurveInconsistency(os.str());
  }
  return out;
}

std::vector<int> monodromy(const std::function<std::vector<cplx>(cplx)>& coefficients, cplx centre,
                           double radius, int steps) {
  if (steps < 8 || !(radius > 0.0)) throw std::invalid_argument("monodromy: bad loop");
  const std::vector<cplx> start = monic_roots(coefficients(centre + radius));
  std::vector<cplx> cur = start;
  for (int s = 1; s <= steps; ++s) {
    const double th = 2.0 * kPi * s / steps;
    const cplx x = centre + radius * std::exp(cplx(0.0, th));
    cur = match_roots(cur, monic_roots(coefficients(x))).ordered;
  }
  const int n = static_cast<int>(start.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) {
    int arg = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(cur[i] - start[k]) < std::abs(cur[i] - start[arg])) arg = k;
    perm[i] = arg;
  }
  return perm;
}

std::vector<int> cycle_type(std::span<const int> perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  for (int k : perm) {
    if (k < 0 || k >= n || seen[k]) throw std::invalid_argument("cycle_type: not a permutation");
    seen[k] = true;
  }
  seen.assign(n, false);
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int k = i; !seen[k]; k = perm[k]) {
      seen[k] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace nikishin

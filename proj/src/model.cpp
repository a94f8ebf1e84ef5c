#include "nikishin/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nikishin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-decade infima of a probe sequence walking toward a singular end.
// Decrements that stay above tolerance and do not shrink mark a divergence.
Verdict classify_trend(const std::vector<double>& infima, double tol) {
  if (infima.size() < 2) return Verdict::inconclusive;
  const std::size_t n = infima.size();
  const double last = infima[n - 2] - infima[n - 1];
  if (!std::isfinite(infima[n - 1])) return Verdict::fail;
  if (last <= tol) return Verdict::pass;
  if (n >= 4) {
    const double prev = infima[n - 3] - infima[n - 2];
    const double prev2 = infima[n - 4] - infima[n - 3];
    if (prev > tol && prev2 > tol && last >= 0.5 * prev) return Verdict::fail;
  }
  return Verdict::inconclusive;
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

struct DecadeProbes {
  std::vector<std::vector<double>> toward_zero;      // decade k: radii in [10^-k, 10^-k+1)
  std::vector<std::vector<double>> toward_infinity;  // decade k: radii in [10^k-1, 10^k)
};

DecadeProbes decade_probes(const ProbeGrid& g) {
  DecadeProbes out;
  const int p = std::max(1, g.points_per_decade);
  for (int k = 1; k <= g.decades_to_zero; ++k) {
    std::vector<double> d;
    for (int i = 0; i < p; ++i) d.push_back(std::pow(10.0, -k + static_cast<double>(i) / p));
    out.toward_zero.push_back(std::move(d));
  }
  for (int k = 1; k <= g.decades_to_infinity; ++k) {
    std::vector<double> d;
    for (int i = 1; i <= p; ++i) d.push_back(std::pow(10.0, k - 1 + static_cast<double>(i) / p));
    out.toward_infinity.push_back(std::move(d));
  }
  return out;
}

}  // namespace

Conductor make_conductor(int index, double r_min, double r_max) {
  if (index < 1) throw std::invalid_argument("conductor index must be >= 1");
  if (!(r_min > 0.0)) throw std::invalid_argument("conductor r_min must be > 0");
  if (!(r_max > r_min)) throw std::invalid_argument("conductor r_max must exceed r_min");
  return Conductor{index, r_min, r_max};
}

std::vector<Conductor> interlaced_conductors(int count, double r_min, double r_max) {
  std::vector<Conductor> out;
  for (int j = 1; j <= count; ++j) out.push_back(make_conductor(j, r_min, r_max));
  return out;
}

InteractionMatrix::InteractionMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw std::invalid_argument("interaction matrix must be square and non-empty");
}

bool InteractionMatrix::is_symmetric() const {
  for (int j = 0; j < size(); ++j)
    for (int k = j + 1; k < size(); ++k)
      if (entries_(j, k) != entries_(k, j)) return false;
  return true;
}

InteractionMatrix build_nikishin_matrix(int count, std::span<const double> q) {
  if (count < 1) throw std::invalid_argument("R must be >= 1");
  if (static_cast<int>(q.size()) != count)
    throw std::invalid_argument("q must have exactly R entries");
  for (double v : q)
    if (!(v > 0.0)) throw std::invalid_argument("q entries must be positive");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(count, count);
  for (int j = 0; j < count; ++j) {
    m(j, j) = 2.0 * q[j] * q[j];
    if (j + 1 < count) {
      m(j, j + 1) = -q[j] * q[j + 1];
      m(j + 1, j) = m(j, j + 1);
    }
  }
  return InteractionMatrix(std::move(m));
}

DefinitenessResult check_positive_definite(const InteractionMatrix& A) {
  if (!A.is_symmetric()) throw std::invalid_argument("interaction matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.entries(), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return {lmin > 0.0, lmin};
}

std::optional<std::vector<double>> nikishin_scales(const InteractionMatrix& A, double tol) {
  const int R = A.size();
  std::vector<double> q(R);
  for (int j = 0; j < R; ++j) {
    if (!(A(j, j) > 0.0)) return std::nullopt;
    q[j] = std::sqrt(A(j, j) / 2.0);
  }
  for (int j = 0; j < R; ++j) {
    for (int k = 0; k < R; ++k) {
      double expected = 0.0;
      if (j == k) expected = A(j, j);
      else if (std::abs(j - k) == 1) expected = -q[j] * q[k];
      if (std::abs(A(j, k) - expected) > tol * std::max(1.0, std::abs(expected)))
        return std::nullopt;
    }
  }
  return q;
}

PotentialSpec::PotentialSpec(int sign, double b, double a, std::optional<PotentialTerm> extra)
    : sign_(sign >= 0 ? 1 : -1), b_(b), a_(a), extra_(std::move(extra)) {
  if (a_ < 0.0) throw std::invalid_argument("log coefficient a must be >= 0");
  if (extra_ && (!extra_->value || !extra_->derivative))
    throw std::invalid_argument("extra potential term needs both value and derivative");
}

double PotentialSpec::value(double x) const {
  const double r = sign_ * x;
  if (!(r > 0.0)) return kInf;
  double v = b_ * r;
  if (a_ != 0.0) v -= a_ * std::log(r);
  if (extra_) v += extra_->value(x);
  return v;
}

double PotentialSpec::derivative(double x) const {
  double d = b_ * sign_;
  if (a_ != 0.0) d -= a_ / x;
  if (extra_) d += extra_->derivative(x);
  return d;
}

std::vector<double> PotentialSpec::poles() const {
  std::vector<double> p;
  if (a_ != 0.0) p.push_back(0.0);
  if (extra_) p.insert(p.end(), extra_->poles.begin(), extra_->poles.end());
  return p;
}

std::vector<PotentialSpec> half_line_potentials(std::span<const Conductor> conductors,
                                                std::span<const double> b,
                                                std::span<const double> a) {
  if (b.size() != conductors.size() || a.size() != conductors.size())
    throw std::invalid_argument("potential parameter count must match conductor count");
  std::vector<PotentialSpec> out;
  for (std::size_t j = 0; j < conductors.size(); ++j)
    out.emplace_back(conductors[j].sign(), b[j], a[j]);
  return out;
}

double radial_minimizer(const PotentialSpec& V, double r_lo, double r_hi) {
  const int n = 4000;
  const double l0 = std::log(r_lo), l1 = std::log(r_hi);
  double best_r = r_lo, best_v = kInf;
  int best_i = 0;
  for (int i = 0; i <= n; ++i) {
    const double r = std::exp(l0 + (l1 - l0) * i / n);
    const double v = V.value(V.sign() * r);
    if (v < best_v) {
      best_v = v;
      best_r = r;
      best_i = i;
    }
  }
  // golden-section refine inside the neighbouring cells
  double a = std::exp(l0 + (l1 - l0) * std::max(0, best_i - 1) / n);
  double b = std::exp(l0 + (l1 - l0) * std::min(n, best_i + 1) / n);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100 && b - a > 1e-14 * b; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (V.value(V.sign() * c) < V.value(V.sign() * d)) b = d;
    else a = c;
  }
  const double r = 0.5 * (a + b);
  return V.value(V.sign() * r) <= best_v ? r : best_r;
}

double window_for_margin(const PotentialSpec& V, double margin) {
  const double r0 = radial_minimizer(V);
  const double target = V.value(V.sign() * r0) + margin;
  double lo = r0, hi = std::max(2.0 * r0, 1.0);
  while (V.value(V.sign() * hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) throw std::invalid_argument("potential does not grow along the conductor");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (V.value(V.sign() * mid) < target) lo = mid;
    else hi = mid;
  }
  return hi;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> ProbeGrid::radii() const {
  std::vector<double> r;
  const auto d = decade_probes(*this);
  for (const auto& dec : d.toward_zero) r.insert(r.end(), dec.begin(), dec.end());
  for (const auto& dec : d.toward_infinity) r.insert(r.end(), dec.begin(), dec.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

bool AdmissibilityReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.verdict == Verdict::pass; });
}

bool AdmissibilityReport::any_fail() const {
  return std::any_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.verdict == Verdict::fail; });
}

double interaction_h(std::span<const PotentialSpec> V, const InteractionMatrix& A, int j,
                     int k, double z, double t) {
  const double R = static_cast<double>(A.size());
  return (V[j].value(z) + V[k].value(t)) / R + A(j, k) * std::log(1.0 / std::abs(z - t));
}

double distance_log(int sign_l, double z) {
  // Sigma_l = sign_l * [0, inf): distance is 0 on it, |z| on the opposite side.
  const double d = (sign_l * z >= 0.0) ? 0.0 : std::abs(z);
  return d == 0.0 ? kInf : std::log(1.0 / d);
}

double growth_q(std::span<const PotentialSpec> V, const InteractionMatrix& A, int k, double z) {
  const int R = A.size();
  double q = 0.0;
  int s = 0;
  for (int l = 0; l < R; ++l) {
    if (l == k || !(A(k, l) < 0.0)) continue;
    ++s;
    q += A(k, l) * distance_log(V[l].sign(), z);
  }
  if (s == 0) return 0.0;
  return q + s * V[k].value(z) / R;
}

AdmissibilityReport check_admissibility(std::span<const PotentialSpec> potentials,
                                        std::span<const Conductor> conductors,
                                        const InteractionMatrix& A, const ProbeGrid& probes) {
  const int R = A.size();
  if (static_cast<int>(potentials.size()) != R || static_cast<int>(conductors.size()) != R)
    throw std::invalid_argument("admissibility: potentials/conductors/matrix sizes differ");
  if (probes.points_per_decade < 1 || (probes.decades_to_zero < 1 && probes.decades_to_infinity < 1))
    throw std::invalid_argument("admissibility: probe grid is empty");

  AdmissibilityReport rep;
  const auto decades = decade_probes(probes);
  const auto radii = probes.radii();
  const double tol = probes.trend_tolerance;

  // [A1] finiteness/continuity of V and consistency of V' against central differences.
  {
    auto& c = rep.conditions[0];
    c.name = "A1";
    c.verdict = Verdict::pass;
    for (int j = 0; j < R; ++j) {
      const auto& V = potentials[j];
      for (double r : radii) {
        const double x = V.sign() * r;
        const double v = V.value(x);
        const double h = 1e-5 * r;
        const double fd = (V.value(x + h) - V.value(x - h)) / (2.0 * h);
        const double d = V.derivative(x);
        const bool finite = std::isfinite(v) && std::isfinite(d);
        const double scale = std::max({std::abs(d), std::abs(fd), 1e-300});
        // central-difference truncation error is O(h^2 V'''), so allow a curvature term
        const double curvature = std::abs(V.value(x + h) - 2.0 * v + V.value(x - h)) / h;
        if (!finite || std::abs(fd - d) > 1e-6 * scale + curvature * 1e-3) {
          c.verdict = Verdict::fail;
          c.witnesses.push_back({j + 1, j + 1, x, 0.0, finite ? fd - d : v});
        }
      }
    }
    c.detail = "V finite at probes and V' consistent with central differences";
  }

  // [A2] a nondegenerate interval of finite V has positive capacity.
  {
    auto& c = rep.conditions[1];
    c.name = "A2";
    c.verdict = Verdict::pass;
    for (int j = 0; j < R; ++j) {
      int finite = 0;
      for (double r : radii)
        if (std::isfinite(potentials[j].value(potentials[j].sign() * r))) ++finite;
      if (finite < 2) {
        c.verdict = Verdict::fail;
        c.witnesses.push_back({j + 1, j + 1, potentials[j].sign() * radii.front(), 0.0, 0.0});
      }
    }
    c.detail = "V finite on an interval of each conductor";
  }

  // [A3] and [A4] share the pair sampler; g(j,k,z,t) is the tested quantity.
  auto pair_scan = [&](auto&& g, ConditionResult& cond, double& global_inf) {
    Verdict v = Verdict::pass;
    global_inf = kInf;
    Witness worst_w{};
    for (int j = 0; j < R; ++j) {
      for (int k = 0; k < R; ++k) {
        const int sj = potentials[j].sign(), sk = potentials[k].sign();
        for (const auto* side : {&decades.toward_zero, &decades.toward_infinity}) {
          std::vector<double> infima;
          Witness dec_w{};
          for (const auto& dec : *side) {
            double m = kInf;
            for (double rz : dec) {
              for (double rt : dec) {
                const double z = sj * rz, t = sk * rt;
                if (z == t) continue;
                const double val = g(j, k, z, t);
                if (val < m) {
                  m = val;
                  dec_w = {j + 1, k + 1, z, t, val};
                }
                if (val < global_inf) {
                  global_inf = val;
                  worst_w = {j + 1, k + 1, z, t, val};
                }
              }
            }
            infima.push_back(m);
          }
          const Verdict tv = classify_trend(infima, tol);
          if (tv == Verdict::fail) cond.witnesses.push_back(dec_w);
          v = worst(v, tv);
        }
      }
    }
    if (v == Verdict::inconclusive && cond.witnesses.empty()) cond.witnesses.push_back(worst_w);
    return v;
  };

  {
    auto& c = rep.conditions[2];
    c.name = "A3";
    double inf_h = 0.0;
    c.verdict = pair_scan(
        [&](int j, int k, double z, double t) { return interaction_h(potentials, A, j, k, z, t); },
        c, inf_h);
    rep.lower_bound_L = inf_h;
    c.detail = "sampled infimum of H_jk along decades toward 0 and infinity";
  }

  {
    auto& c = rep.conditions[3];
    c.name = "A4";
    c.verdict = Verdict::fail;
    const double Rd = static_cast<double>(R);
    for (double cand : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) {
      ConditionResult trial;
      double inf_g = 0.0;
      const Verdict v = pair_scan(
          [&](int j, int k, double z, double t) {
            return interaction_h(potentials, A, j, k, z, t) -
                   (1.0 - cand) / Rd * (potentials[j].value(z) + potentials[k].value(t));
          },
          trial, inf_g);
      if (v == Verdict::pass) {
        c.verdict = Verdict::pass;
        c.witnesses.clear();
        rep.fitted_c = cand;
        rep.fitted_C = std::max(1e-12, -Rd * Rd * inf_g);
        break;
      }
      if (v == Verdict::inconclusive && c.verdict == Verdict::fail) {
        c.verdict = Verdict::inconclusive;
        c.witnesses = trial.witnesses;
      } else if (c.verdict == Verdict::fail) {
        c.witnesses = trial.witnesses;
      }
    }
    std::ostringstream os;
    os << "smallest sampled c with bounded remainder: c=" << rep.fitted_c << ", C=" << rep.fitted_C;
    c.detail = os.str();
  }

  {
    auto& c = rep.conditions[4];
    c.name = "A5";
    c.verdict = Verdict::pass;
    rep.q_lower_bounds.assign(R, kInf);
    for (int k = 0; k < R; ++k) {
      const int sk = potentials[k].sign();
      for (const auto* side : {&decades.toward_zero, &decades.toward_infinity}) {
        std::vector<double> infima;
        Witness w{};
        for (const auto& dec : *side) {
          double m = kInf;
          for (double r : dec) {
            const double val = growth_q(potentials, A, k, sk * r);
            if (val < m) {
              m = val;
              w = {k + 1, k + 1, sk * r, 0.0, val};
            }
          }
          infima.push_back(m);
          rep.q_lower_bounds[k] = std::min(rep.q_lower_bounds[k], m);
        }
        const Verdict tv = classify_trend(infima, tol);
        if (tv != Verdict::pass) c.witnesses.push_back(w);
        c.verdict = worst(c.verdict, tv);
      }
    }
    c.detail = "sampled Q_k along decades toward 0 and infinity";
  }
  return rep;
}

}  // namespace nikishin

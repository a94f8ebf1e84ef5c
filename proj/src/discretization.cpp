#include "nikishin/discretization.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nikishin {

namespace {

// Second antiderivative of ln|t|, with G(0) = 0.
inline double g2(double t) {
  if (t == 0.0) return 0.0;
  const double t2 = t * t;
  return 0.5 * t2 * std::log(std::abs(t)) - 0.75 * t2;
}

// Multipole-type expansion of the cell-averaged kernel around the centre
// distance c, valid for (alpha+beta)/|c| small.
double far_field_energy(double c, double alpha, double beta) {
  double k = -std::log(std::abs(c));
  const double inv_c2 = 1.0 / (c * c);
  double c_pow = inv_c2;  // c^-(m-2)
  double fact_m3 = 1.0;   // (m-3)!
  for (int m = 4; m <= 60; m += 2) {
    if (m > 4) fact_m3 *= static_cast<double>((m - 4) * (m - 3));
    double s = 0.0;
    double fj = 1.0;  // j!
    for (int j = 1; j < m; j += 2) {
      if (j > 1) fj *= static_cast<double>((j - 1) * j);
      const int kk = m - j;
      double fk = 1.0;
      for (int i = 2; i <= kk; ++i) fk *= i;
      s += std::pow(alpha, j - 1) * std::pow(beta, kk - 1) / (fj * fk);
    }
    const double term = fact_m3 * c_pow * s;
    k += term;
    if (std::abs(term) < 1e-18 * std::abs(k) + 1e-300) break;
    c_pow *= inv_c2;
  }
  return k;
}

KernelSystem assemble_impl(std::vector<Grid> grids, const InteractionMatrix& A,
                           std::span<const PotentialSpec> potentials, bool parallel) {
  const int R = A.size();
  if (static_cast<int>(grids.size()) != R || static_cast<int>(potentials.size()) != R)
    throw std::invalid_argument("assemble: grids/potentials/matrix sizes differ");
  KernelSystem sys;
  sys.A = A;
  sys.grids = std::move(grids);
  std::vector<std::vector<Cell>> cells(R);
  for (int j = 0; j < R; ++j) {
    const Grid& g = sys.grids[j];
    cells[j] = g.cells();
    for (double p : potentials[j].poles()) {
      for (int i = 0; i < g.size(); ++i) {
        const Cell c = cells[j][i];
        if (p >= c.lo && p <= c.hi) {
          std::ostringstream os;
          os << "assemble: pole of V'_" << j + 1 << " at x=" << p << " lies in cell " << i
             << " [" << c.lo << ", " << c.hi << "] of conductor " << j + 1;
          throw std::invalid_argument(os.str());
        }
      }
    }
    Eigen::VectorXd v(g.size());
    for (int i = 0; i < g.size(); ++i) v(i) = potentials[j].value(g.center(i));
    sys.potential.push_back(std::move(v));
  }
  sys.blocks_.resize(static_cast<std::size_t>(R * R));
  for (int j = 0; j < R; ++j) {
    for (int k = j; k < R; ++k) {
      if (!sys.has_block(j, k) && !sys.has_block(k, j)) continue;
      RowMatrix& b = sys.blocks_[j * R + k];
      if (parallel) kernels::fill_block(cells[j], cells[k], b);
      else kernels::fill_block_serial(cells[j], cells[k], b);
      if (k != j) sys.blocks_[k * R + j] = b.transpose();
    }
  }
  return sys;
}

Weights field_impl(const KernelSystem& sys, const Weights& w, bool parallel) {
  const int R = sys.components();
  if (static_cast<int>(w.size()) != R) throw std::invalid_argument("field: component count mismatch");
  for (int j = 0; j < R; ++j)
    if (w[j].size() != sys.grids[j].size())
      throw std::invalid_argument("field: weight vector does not match grid");
  Weights g(R);
  for (int j = 0; j < R; ++j) {
    g[j] = Eigen::VectorXd::Zero(sys.grids[j].size());
    std::span<double> out(g[j].data(), static_cast<std::size_t>(g[j].size()));
    for (int l = 0; l < R; ++l) {
      if (!sys.has_block(j, l)) continue;
      std::span<const double> in(w[l].data(), static_cast<std::size_t>(w[l].size()));
      if (parallel) kernels::gemv_add(sys.block(j, l), in, sys.A(j, l), out);
      else kernels::gemv_add_serial(sys.block(j, l), in, sys.A(j, l), out);
    }
  }
  return g;
}

inline std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

Cell Grid::cell(int i) const {
  if (sign > 0) return {edges[i], edges[i + 1]};
  return {-edges[i + 1], -edges[i]};
}

std::vector<Cell> Grid::cells() const {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i) out.push_back(cell(i));
  return out;
}

int Grid::locate(double x) const {
  const double r = sign * x;
  if (r < edges.front() || r > edges.back()) return -1;
  auto it = std::upper_bound(edges.begin(), edges.end(), r);
  int i = static_cast<int>(it - edges.begin()) - 1;
  if (i >= size()) i = size() - 1;
  return i;
}

Grid build_grid(const Conductor& conductor, int n, double ratio) {
  if (n < kMinCells) {
    std::ostringstream os;
    os << "build_grid: n=" << n << " is below the minimum of " << kMinCells << " cells";
    throw std::invalid_argument(os.str());
  }
  if (!(ratio >= 1.0)) throw std::invalid_argument("build_grid: refinement ratio must be >= 1");
  if (!(conductor.r_min > 0.0) || !(conductor.r_max > conductor.r_min))
    throw std::invalid_argument("build_grid: invalid conductor window");
  Grid g;
  g.component = conductor.index;
  g.sign = conductor.sign();
  g.edges.resize(static_cast<std::size_t>(n) + 1);
  const double L = conductor.r_max - conductor.r_min;
  g.edges[0] = conductor.r_min;
  if (ratio == 1.0) {
    for (int i = 1; i < n; ++i) g.edges[i] = conductor.r_min + L * i / n;
  } else {
    const double h0 = L * (ratio - 1.0) / (std::pow(ratio, n) - 1.0);
    double h = h0, e = conductor.r_min;
    for (int i = 1; i < n; ++i) {
      e += h;
      g.edges[i] = e;
      h *= ratio;
    }
  }
  g.edges[n] = conductor.r_max;
  for (int i = 0; i < n; ++i)
    if (!(g.edges[i + 1] > g.edges[i]))
      throw std::invalid_argument("build_grid: degenerate cell (ratio too large for n)");
  return g;
}

double mutual_energy(Cell a, Cell b) {
  if (!(a.hi > a.lo) || !(b.hi > b.lo)) throw std::invalid_argument("mutual_energy: empty cell");
  if (a.lo == b.lo && a.hi == b.hi) return std::log(1.0 / a.width()) + 1.5;
  if (a.lo < b.hi && b.lo < a.hi)
    throw std::invalid_argument("mutual_energy: cells overlap without being identical");
  const double alpha = 0.5 * a.width(), beta = 0.5 * b.width();
  const double c = a.center() - b.center();
  if (std::abs(c) > 4.0 * (alpha + beta)) return far_field_energy(c, alpha, beta);
  const double d = g2(a.hi - b.lo) - g2(a.lo - b.lo) - g2(a.hi - b.hi) + g2(a.lo - b.hi);
  return -d / (a.width() * b.width());
}

KernelSystem assemble(std::vector<Grid> grids, const InteractionMatrix& A,
                      std::span<const PotentialSpec> potentials) {
  return assemble_impl(std::move(grids), A, potentials, true);
}

KernelSystem assemble_serial(std::vector<Grid> grids, const InteractionMatrix& A,
                             std::span<const PotentialSpec> potentials) {
  return assemble_impl(std::move(grids), A, potentials, false);
}

VectorMeasure zero_measure(const std::vector<Grid>& grids) {
  VectorMeasure mu;
  mu.grids = grids;
  for (const auto& g : grids) mu.weights.push_back(Eigen::VectorXd::Zero(g.size()));
  return mu;
}

void validate_measure(const VectorMeasure& mu, std::span<const double> masses) {
  if (static_cast<int>(masses.size()) != mu.components())
    throw std::invalid_argument("measure: mass count mismatch");
  for (int j = 0; j < mu.components(); ++j) {
    if (mu.weights[j].size() != mu.grids[j].size())
      throw std::invalid_argument("measure: weights do not match grid");
    if ((mu.weights[j].array() < 0.0).any())
      throw std::invalid_argument("measure: negative weight");
    if (std::abs(mu.mass(j) - masses[j]) > 1e-12 * std::max(1.0, masses[j]))
      throw std::invalid_argument("measure: component mass differs from configured mass");
  }
}

Weights field(const KernelSystem& sys, const Weights& w) { return field_impl(sys, w, true); }
Weights field_serial(const KernelSystem& sys, const Weights& w) { return field_impl(sys, w, false); }

double energy(const KernelSystem& sys, const Weights& w) {
  const Weights g = field(sys, w);
  double e = 0.0;
  for (int j = 0; j < sys.components(); ++j)
    e += kernels::dot(view(w[j]), view(g[j])) + 2.0 * kernels::dot(view(w[j]), view(sys.potential[j]));
  return e;
}

double energy(const KernelSystem& sys, const VectorMeasure& mu) { return energy(sys, mu.weights); }

Weights effective_potential(const KernelSystem& sys, const Weights& w) {
  Weights g = field(sys, w);
  for (int j = 0; j < sys.components(); ++j) g[j] += sys.potential[j];
  return g;
}

Weights effective_potential(const KernelSystem& sys, const VectorMeasure& mu) {
  return effective_potential(sys, mu.weights);
}

double mixed_energy(const KernelSystem& sys, const Weights& mu, const Weights& nu) {
  const Weights g = field(sys, nu);
  double e = 0.0;
  for (int j = 0; j < sys.components(); ++j)
    e += kernels::dot(view(mu[j]), view(g[j])) +
         kernels::dot(view(sys.potential[j]), view(mu[j])) +
         kernels::dot(view(sys.potential[j]), view(nu[j]));
  return e;
}

std::vector<double> l1_distance(const Weights& a, const Weights& b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: component count mismatch");
  std::vector<double> out;
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back((a[j] - b[j]).cwiseAbs().sum());
  return out;
}

}  // namespace nikishin

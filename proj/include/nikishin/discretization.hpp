#pragma once

#include "nikishin/kernels.hpp"
#include "nikishin/model.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace nikishin {

/// Cells on one conductor, stored in radial coordinates (edges increasing).
struct Grid {
  int component = 1;  // 1-based conductor index
  int sign = 1;
  std::vector<double> edges;

  int size() const { return static_cast<int>(edges.size()) - 1; }
  double width(int i) const { return edges[i + 1] - edges[i]; }
  double radial_center(int i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double center(int i) const { return sign * radial_center(i); }
  /// Physical cell (lo < hi after the sign flip).
  Cell cell(int i) const;
  std::vector<Cell> cells() const;
  /// Index of the cell whose physical closure contains x, or -1.
  int locate(double x) const;
};

inline constexpr int kMinCells = 8;

/// n cells on [r_min, r_max]; consecutive widths grow by `ratio` away from r_min.
Grid build_grid(const Conductor& conductor, int n, double ratio);

/// Log-energy (1/(|a||b|)) ∫_a∫_b ln(1/|x-y|) dx dy of two uniform unit-mass
/// cells. Exact for identical, adjacent and disjoint cells.
double mutual_energy(Cell a, Cell b);

struct KernelSystem {
  InteractionMatrix A;
  std::vector<Grid> grids;
  std::vector<Eigen::VectorXd> potential;  // v^j at cell centres

  int components() const { return A.size(); }
  bool has_block(int j, int k) const { return A(j, k) != 0.0; }
  const RowMatrix& block(int j, int k) const { return blocks_[j * components() + k]; }

  // filled by assemble()
  std::vector<RowMatrix> blocks_;
};

/// Fills K^{jk} for every a_jk != 0 and v^j = V_j(centre). Cells are mapped to
/// physical coordinates before integrating.
KernelSystem assemble(std::vector<Grid> grids, const InteractionMatrix& A,
                      std::span<const PotentialSpec> potentials);

/// Same system with the single-threaded reference kernels.
KernelSystem assemble_serial(std::vector<Grid> grids, const InteractionMatrix& A,
                             std::span<const PotentialSpec> potentials);

using Weights = std::vector<Eigen::VectorXd>;

/// Piecewise-constant densities: w^j_i is the mass of cell i on conductor j.
struct VectorMeasure {
  std::vector<Grid> grids;
  Weights weights;

  int components() const { return static_cast<int>(grids.size()); }
  double mass(int j) const { return weights[j].sum(); }
  double density(int j, int i) const { return weights[j](i) / grids[j].width(i); }
};

VectorMeasure zero_measure(const std::vector<Grid>& grids);

/// Throws if weights are negative or masses differ from `masses` by > 1e-12.
void validate_measure(const VectorMeasure& mu, std::span<const double> masses);

/// g^j = sum_l a_jl K^{jl} w^l (the logarithmic part of the effective potential).
Weights field(const KernelSystem& sys, const Weights& w);
Weights field_serial(const KernelSystem& sys, const Weights& w);

double energy(const KernelSystem& sys, const VectorMeasure& mu);
double energy(const KernelSystem& sys, const Weights& w);

/// phi^j = sum_l a_jl K^{jl} w^l + v^j; equals half the gradient of energy.
Weights effective_potential(const KernelSystem& sys, const VectorMeasure& mu);
Weights effective_potential(const KernelSystem& sys, const Weights& w);

/// Bilinear companion of energy: energy(m)+energy(n)-2*mixed(m,n) is the
/// quadratic form of m-n.
double mixed_energy(const KernelSystem& sys, const Weights& mu, const Weights& nu);

/// Sum over components of ∫|rho_j - rho'_j| (= sum of |w - w'|).
std::vector<double> l1_distance(const Weights& a, const Weights& b);

}  // namespace nikishin

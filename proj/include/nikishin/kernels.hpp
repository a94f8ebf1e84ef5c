#pragma once

// Data-parallel inner kernels. Each OpenMP kernel has a serial twin with the
// same per-entry arithmetic; the serial version is the reference used by the
// tests and by the benchmark. Row results never depend on the thread count.

#include <Eigen/Dense>

#include <span>

namespace nikishin {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Cell {
  double lo;
  double hi;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

namespace kernels {

/// out(i, m) = mutual_energy(rows[i], cols[m]).
void fill_block(std::span<const Cell> rows, std::span<const Cell> cols, RowMatrix& out);
void fill_block_serial(std::span<const Cell> rows, std::span<const Cell> cols, RowMatrix& out);

/// y += alpha * K x (row-wise dot products, fixed summation order).
void gemv_add(const RowMatrix& K, std::span<const double> x, double alpha, std::span<double> y);
void gemv_add_serial(const RowMatrix& K, std::span<const double> x, double alpha,
                     std::span<double> y);

/// Fixed-order dot product shared by both paths.
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace kernels
}  // namespace nikishin

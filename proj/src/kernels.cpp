#include "nikishin/kernels.hpp"

#include "nikishin/discretization.hpp"

#include <stdexcept>

namespace nikishin::kernels {

namespace {

inline double row_dot(const double* row, const double* x, Eigen::Index n) {
  // Four interleaved partial sums combined in a fixed order.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  Eigen::Index i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += row[i] * x[i];
    s1 += row[i + 1] * x[i + 1];
    s2 += row[i + 2] * x[i + 2];
    s3 += row[i + 3] * x[i + 3];
  }
  for (; i < n; ++i) s0 += row[i] * x[i];
  return (s0 + s1) + (s2 + s3);
}

void check_gemv(const RowMatrix& K, std::span<const double> x, std::span<double> y) {
  if (static_cast<Eigen::Index>(x.size()) != K.cols() ||
      static_cast<Eigen::Index>(y.size()) != K.rows())
    throw std::invalid_argument("gemv: dimension mismatch");
}

}  // namespace

void fill_block(std::span<const Cell> rows, std::span<const Cell> cols, RowMatrix& out) {
  out.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  const auto nr = static_cast<long>(rows.size());
  const auto nc = static_cast<long>(cols.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nr; ++i)
    for (long m = 0; m < nc; ++m) out(i, m) = mutual_energy(rows[i], cols[m]);
}

void fill_block_serial(std::span<const Cell> rows, std::span<const Cell> cols, RowMatrix& out) {
  out.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t m = 0; m < cols.size(); ++m)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
          mutual_energy(rows[i], cols[m]);
}

void gemv_add(const RowMatrix& K, std::span<const double> x, double alpha, std::span<double> y) {
  check_gemv(K, x, y);
  const long n = static_cast<long>(K.rows());
  const Eigen::Index c = K.cols();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += alpha * row_dot(K.data() + i * c, x.data(), c);
}

void gemv_add_serial(const RowMatrix& K, std::span<const double> x, double alpha,
                     std::span<double> y) {
  check_gemv(K, x, y);
  const Eigen::Index c = K.cols();
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    y[i] += alpha * row_dot(K.data() + i * c, x.data(), c);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  return row_dot(a.data(), b.data(), static_cast<Eigen::Index>(a.size()));
}

}  // namespace nikishin::kernels

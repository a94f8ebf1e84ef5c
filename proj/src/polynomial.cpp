#include "nikishin/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nikishin {

std::vector<cplx> elementary_symmetric(std::span<const cplx> values) {
  std::vector<cplx> e(values.size() + 1, cplx(0.0));
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
  return e;
}

cplx eval_monic(std::span<const cplx> c, cplx z) {
  cplx v = 1.0;
  for (const cplx& ck : c) v = v * z + ck;
  return v;
}

std::vector<cplx> monic_roots(std::span<const cplx> c) {
  const int n = static_cast<int>(c.size());
  if (n == 0) return {};
  if (n == 1) return {-c[0]};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) comp(0, k) = -c[k];
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  for (cplx& z : r) {
    for (int it = 0; it < 3; ++it) {
      cplx p = 1.0, dp = 0.0;
      for (const cplx& ck : c) {
        dp = dp * z + p;
        p = p * z + ck;
      }
      if (std::abs(dp) == 0.0) break;
      const cplx step = p / dp;
      // only accept steps that do not jump between roots
      if (!(std::abs(step) < 1e-3 * (1.0 + std::abs(z)))) break;
      z -= step;
    }
  }
  return r;
}

double sylvester_discriminant(std::span<const double> c) {
  const int n = static_cast<int>(c.size());
  if (n < 1) throw std::invalid_argument("sylvester_discriminant: degree must be >= 1");
  if (n == 1) return 1.0;
  // p = [1, c...] (degree n), dp = [n, (n-1) c0, ...] (degree n-1)
  std::vector<double> p(n + 1), dp(n);
  p[0] = 1.0;
  for (int k = 0; k < n; ++k) p[k + 1] = c[k];
  for (int k = 0; k < n; ++k) dp[k] = static_cast<double>(n - k) * p[k];
  const int m = 2 * n - 1;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
  for (int r = 0; r < n - 1; ++r)
    for (int k = 0; k <= n; ++k) S(r, r + k) = p[k];
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) S(n - 1 + r, r + k) = dp[k];
  const double res = S.partialPivLu().determinant();
  const int sign_exp = n * (n - 1) / 2;
  return (sign_exp % 2 == 0) ? res : -res;
}

double cubic_discriminant(double p, double q) { return -4.0 * p * p * p - 27.0 * q * q; }

std::vector<cplx> depressed_cubic_roots(double p, double q) {
  // rescale z = s w so that the coefficients are O(1) and q^2 cannot overflow
  const double s = std::max(std::sqrt(std::abs(p)), std::cbrt(std::abs(q)));
  if (s > 0.0 && std::isfinite(s) && (s > 1e50 || s < 1e-50)) {
    auto w = depressed_cubic_roots(p / (s * s), q / (s * s * s));
    for (cplx& z : w) z *= s;
    return w;
  }
  const double disc = cubic_discriminant(p, q);
  if (disc > 0.0) {
    // three distinct real roots (p < 0)
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::vector<double> r(3);
    for (int k = 0; k < 3; ++k) r[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
    std::sort(r.begin(), r.end());
    return {r[0], r[1], r[2]};
  }
  // one real root and a conjugate pair (or a multiple root when disc == 0)
  const double half_disc = q * q / 4.0 + p * p * p / 27.0;
  const double sq = std::sqrt(std::max(half_disc, 0.0));
  const double big = (q > 0.0) ? -q / 2.0 - sq : -q / 2.0 + sq;
  const double u = std::cbrt(big);
  const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
  // u - v = (u^3 - v^3)/(u^2 + u v + v^2) keeps the imaginary part accurate near disc = 0
  const double uv_den = u * u + u * v + v * v;
  const double u3_minus_v3 = (q > 0.0) ? -2.0 * sq : 2.0 * sq;
  const double diff = uv_den != 0.0 ? u3_minus_v3 / uv_den : 0.0;
  const double real_root = u + v;
  const double re = -real_root / 2.0;
  const double im = std::abs(std::sqrt(3.0) / 2.0 * diff);
  return {cplx(real_root, 0.0), cplx(re, im), cplx(re, -im)};
}

}  // namespace nikishin

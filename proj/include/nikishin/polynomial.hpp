#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nikishin {

using cplx = std::complex<double>;

/// e_0 .. e_n of the given values (e_0 = 1).
std::vector<cplx> elementary_symmetric(std::span<const cplx> values);

/// Roots of z^n + c[0] z^(n-1) + ... + c[n-1] (companion eigenvalues, then
/// a Newton polish on the original polynomial).
std::vector<cplx> monic_roots(std::span<const cplx> c);

/// Discriminant of the monic z^n + c[0] z^(n-1) + ... + c[n-1] through the
/// Sylvester determinant of p and p'.
double sylvester_discriminant(std::span<const double> c);

/// -4p^3 - 27q^2 for z^3 + p z + q.
double cubic_discriminant(double p, double q);

/// Roots of z^3 + p z + q with real p, q. Three real roots are returned in
/// ascending order; otherwise the real root first, then the pair with
/// positive imaginary part, then its conjugate.
std::vector<cplx> depressed_cubic_roots(double p, double q);

/// Value of the monic polynomial at z.
cplx eval_monic(std::span<const cplx> c, cplx z);

}  // namespace nikishin

#pragma once

#include <array>
#include <complex>
#include <vector>

namespace aptsense {

using cxd = std::complex<double>;

/// The three roots of the monic cubic z^3 + a2 z^2 + a1 z + a0 over ℂ,
/// computed by the depressed-cubic (Cardano) formula with one Newton polish
/// step per root. Order is unspecified.
std::array<cxd, 3> cubic_roots_monic(cxd a2, cxd a1, cxd a0);

/// Discriminant of c3 x^3 + c2 x^2 + c1 x + c0 (positive: three distinct
/// real roots, negative: one real root).
double cubic_discriminant(double c3, double c2, double c1, double c0);

/// All real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0, ascending, polished by
/// Newton iteration on the real axis. Degenerate leading coefficients reduce
/// the degree (quadratic / linear). Roots closer than merge_tol (relative to
/// the root magnitude) are merged. An identically-zero polynomial or a
/// constant non-zero one yields an empty vector.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0,
                                     double merge_tol = 1e-12);

}  // namespace aptsense

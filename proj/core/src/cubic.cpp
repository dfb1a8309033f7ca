#include "aptsense/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace aptsense {

namespace {

cxd polish_monic(cxd z, cxd a2, cxd a1, cxd a0) {
  for (int it = 0; it < 2; ++it) {
    const cxd f = ((z + a2) * z + a1) * z + a0;
    const cxd df = (3.0 * z + 2.0 * a2) * z + a1;
    if (std::abs(df) == 0.0) break;
    z -= f / df;
  }
  return z;
}

double polish_real(double x, double c3, double c2, double c1, double c0) {
  for (int it = 0; it < 3; ++it) {
    const double f = ((c3 * x + c2) * x + c1) * x + c0;
    const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    if (df == 0.0) break;
    const double step = f / df;
    x -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

std::array<cxd, 3> cubic_roots_monic(cxd a2, cxd a1, cxd a0) {
  // Depressed form t^3 + p t + q with z = t - a2/3.
  const cxd shift = a2 / 3.0;
  const cxd p = a1 - a2 * a2 / 3.0;
  const cxd q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;

  const cxd s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  // Pick the branch of u^3 = -q/2 ± s with the larger magnitude.
  cxd u3 = -q / 2.0 + s;
  if (std::abs(-q / 2.0 - s) > std::abs(u3)) u3 = -q / 2.0 - s;

  std::array<cxd, 3> roots;
  if (std::abs(u3) == 0.0) {
    roots = {-shift, -shift, -shift};  // p = q = 0: triple root
  } else {
    const cxd u = std::pow(u3, 1.0 / 3.0);
    constexpr double half_sqrt3 = 0.86602540378443864676;
    const cxd omega(-0.5, half_sqrt3);
    cxd uk = u;
    for (int k = 0; k < 3; ++k) {
      roots[k] = uk - p / (3.0 * uk) - shift;
      uk *= omega;
    }
  }
  for (auto& z : roots) z = polish_monic(z, a2, a1, a0);
  return roots;
}

double cubic_discriminant(double c3, double c2, double c1, double c0) {
  return 18.0 * c3 * c2 * c1 * c0 - 4.0 * c2 * c2 * c2 * c0 + c2 * c2 * c1 * c1 -
         4.0 * c3 * c1 * c1 * c1 - 27.0 * c3 * c3 * c0 * c0;
}

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0,
                                     double merge_tol) {
  std::vector<double> out;
  if (c3 == 0.0) {
    if (c2 == 0.0) {
      if (c1 != 0.0) out.push_back(-c0 / c1);
      return out;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (c1 + std::copysign(sq, c1));
    out.push_back(qq / c2);
    if (qq != 0.0) out.push_back(c0 / qq);
    else out.push_back(0.0);
  } else {
    const auto z = cubic_roots_monic(cxd(c2 / c3), cxd(c1 / c3), cxd(c0 / c3));
    if (cubic_discriminant(c3, c2, c1, c0) >= 0.0) {
      for (const auto& r : z) out.push_back(polish_real(r.real(), c3, c2, c1, c0));
    } else {
      auto best = std::min_element(z.begin(), z.end(), [](const cxd& a, const cxd& b) {
        return std::abs(a.imag()) < std::abs(b.imag());
      });
      out.push_back(polish_real(best->real(), c3, c2, c1, c0));
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<double> merged;
  for (double x : out) {
    if (!merged.empty() &&
        std::abs(x - merged.back()) <= merge_tol * std::max({1.0, std::abs(x), std::abs(merged.back())}))
      continue;
    merged.push_back(x);
  }
  return merged;
}

}  // namespace aptsense

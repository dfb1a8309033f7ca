#include "aptsense/stability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aptsense/spectrum.hpp"

namespace aptsense {

namespace {

constexpr double kMarginalBand = 1e-9;  // |max Re λ| band, units of Γ

}  // namespace

FluctuationMatrix build_fluctuation_matrix(const AptConfig& apt, double U_a, cxd alpha) {
  if (apt.g != 0.0)
    throw std::invalid_argument("build_fluctuation_matrix: requires g == 0");
  const double G = apt.Gamma;
  const double gm = apt.gamma;
  const double D = apt.Delta;
  const cxd a2 = alpha * alpha;

  FluctuationMatrix F;
  F.Gamma = G;
  F.Lambda = U_a * (a2 - std::conj(a2));
  F.Xi = U_a * 2.0 * a2.real();
  F.Sigma = 4.0 * U_a * std::norm(alpha);
  const double iLam = (cxd(0.0, 1.0) * F.Lambda).real();  // iΛ is real

  const double S = F.Sigma, X = F.Xi;
  const double rows[6][6] = {
      {-gm, D, -G, 0, 0, 0},
      {-D, -gm, 0, -G, 0, 0},
      {-G, 0, -gm - iLam, S - X, -G, 0},
      {0, -G, -S - X, -gm + iLam, 0, -G},
      {0, 0, -G, 0, -gm, -D},
      {0, 0, 0, -G, D, -gm},
  };
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) F.at(r, c) = rows[r][c];
  return F;
}

Mat6 quadrature_jacobian(const SystemParams& p, const std::array<cxd, 3>& v) {
  const CouplingMatrix H = build_matrix(p);
  const double U[3] = {p.U_b1, p.U_a, p.U_b2};
  const cxd i(0.0, 1.0);

  Mat6 J{};
  auto at = [&J](int r, int c) -> double& { return J[static_cast<size_t>(6 * r + c)]; };

  for (int k = 0; k < 3; ++k) {
    // δv̇_k = A δv_k + B δv_k† + Σ_j C_kj δv_j
    const cxd A = -i * H.at(k, k) - 4.0 * i * U[k] * std::norm(v[size_t(k)]);
    const cxd B = -2.0 * i * U[k] * v[size_t(k)] * v[size_t(k)];
    at(2 * k, 2 * k) = A.real() + B.real();
    at(2 * k, 2 * k + 1) = B.imag() - A.imag();
    at(2 * k + 1, 2 * k) = A.imag() + B.imag();
    at(2 * k + 1, 2 * k + 1) = A.real() - B.real();
    for (int j = 0; j < 3; ++j) {
      if (j == k || H.at(k, j) == cxd(0.0)) continue;
      const cxd C = -i * H.at(k, j);
      at(2 * k, 2 * j) = C.real();
      at(2 * k, 2 * j + 1) = -C.imag();
      at(2 * k + 1, 2 * j) = C.imag();
      at(2 * k + 1, 2 * j + 1) = C.real();
    }
  }
  return J;
}

Poly6 characteristic_polynomial(const Mat6& m) {
  auto mul = [](const Mat6& a, const Mat6& b) {
    Mat6 c{};
    for (int r = 0; r < 6; ++r)
      for (int k = 0; k < 6; ++k) {
        const double ark = a[static_cast<size_t>(6 * r + k)];
        if (ark == 0.0) continue;
        for (int col = 0; col < 6; ++col)
          c[static_cast<size_t>(6 * r + col)] += ark * b[static_cast<size_t>(6 * k + col)];
      }
    return c;
  };
  auto trace = [](const Mat6& a) {
    double t = 0.0;
    for (int k = 0; k < 6; ++k) t += a[static_cast<size_t>(7 * k)];
    return t;
  };

  Poly6 poly{};
  poly[0] = 1.0;
  Mat6 Mk = m;
  for (int k = 1; k <= 6; ++k) {
    const double ak = -trace(Mk) / k;
    poly[static_cast<size_t>(k)] = ak;
    if (k == 6) break;
    Mat6 shifted = Mk;
    for (int d = 0; d < 6; ++d) shifted[static_cast<size_t>(7 * d)] += ak;
    Mk = mul(m, shifted);
  }
  return poly;
}

bool routh_array_stable(const Poly6& poly) {
  // Rows of the Routh array for a degree-6 polynomial; 4 columns suffice.
  constexpr int cols = 4;
  double scale = 0.0;
  for (double c : poly) scale = std::max(scale, std::abs(c));
  const double eps = 1e-30 * std::max(scale, 1.0);

  std::vector<std::array<double, cols>> rows(7, std::array<double, cols>{});
  for (int j = 0; j < cols; ++j) {
    rows[0][static_cast<size_t>(j)] = 2 * j < 7 ? poly[static_cast<size_t>(2 * j)] : 0.0;
    rows[1][static_cast<size_t>(j)] = 2 * j + 1 < 7 ? poly[static_cast<size_t>(2 * j + 1)] : 0.0;
  }
  for (int r = 2; r < 7; ++r) {
    bool all_zero = true;
    for (int j = 0; j < cols; ++j)
      if (rows[static_cast<size_t>(r - 1)][static_cast<size_t>(j)] != 0.0) all_zero = false;
    if (all_zero) {
      // Row of zeros: differentiate the auxiliary polynomial of the row above.
      const int order = 7 - r;  // degree of the auxiliary polynomial
      for (int j = 0; j < cols; ++j) {
        const double coeff = rows[static_cast<size_t>(r - 2)][static_cast<size_t>(j)];
        const int power = order + 1 - 2 * j;
        rows[static_cast<size_t>(r - 1)][static_cast<size_t>(j)] =
            power > 0 ? coeff * power : 0.0;
      }
    }
    double pivot = rows[static_cast<size_t>(r - 1)][0];
    if (pivot == 0.0) pivot = eps;  // epsilon substitution
    const double above = rows[static_cast<size_t>(r - 2)][0];
    for (int j = 0; j < cols - 1; ++j) {
      rows[static_cast<size_t>(r)][static_cast<size_t>(j)] =
          (pivot * rows[static_cast<size_t>(r - 2)][static_cast<size_t>(j + 1)] -
           above * rows[static_cast<size_t>(r - 1)][static_cast<size_t>(j + 1)]) /
          pivot;
    }
  }
  for (int r = 0; r < 7; ++r) {
    double first = rows[static_cast<size_t>(r)][0];
    if (first == 0.0) first = eps;
    if (first < 0.0) return false;
  }
  return true;
}

std::array<cxd, 6> companion_roots(const Poly6& poly) {
  Eigen::Matrix<double, 6, 6> C = Eigen::Matrix<double, 6, 6>::Zero();
  for (int r = 1; r < 6; ++r) C(r, r - 1) = 1.0;
  for (int r = 0; r < 6; ++r) C(r, 5) = -poly[static_cast<size_t>(6 - r)];
  Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(C, /*computeEigenvectors=*/false);
  std::array<cxd, 6> roots{};
  for (int k = 0; k < 6; ++k) roots[static_cast<size_t>(k)] = es.eigenvalues()(k);
  std::sort(roots.begin(), roots.end(), [](const cxd& a, const cxd& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return roots;
}

StabilityVerdict stability_from_jacobian(const Mat6& m, double Gamma) {
  const Poly6 poly = characteristic_polynomial(m);
  StabilityVerdict v;
  v.routh_stable = routh_array_stable(poly);
  const auto roots = companion_roots(poly);
  v.max_real_part = roots[0].real();
  v.stable = v.max_real_part < 0.0;
  v.marginal = std::abs(v.max_real_part) < kMarginalBand * Gamma;
  v.method_agreement = (v.routh_stable == v.stable);
  return v;
}

StabilityVerdict routh_hurwitz_stable(const FluctuationMatrix& m) {
  return stability_from_jacobian(m.m, m.Gamma);
}

BranchSet classify_branch_stability(BranchSet branches, const SystemParams& p) {
  for (auto& b : branches.roots) {
    const Mat6 J = quadrature_jacobian(p, {b.state.beta1, b.state.alpha, b.state.beta2});
    const StabilityVerdict v = stability_from_jacobian(J, p.Gamma);
    b.stable = v.stable && !v.marginal;
    b.marginal = v.marginal;
  }
  return branches;
}

BranchSet classify_branch_stability(BranchSet branches, const AptConfig& apt,
                                    double drive_detuning, KerrMode which, double U) {
  const SystemParams p = scenario_params(apt, drive_detuning, which, U, 0.0);
  return classify_branch_stability(std::move(branches), p);
}

}  // namespace aptsense

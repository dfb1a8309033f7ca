#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "aptsense/dynamics.hpp"
#include "aptsense/spectrum.hpp"
#include "aptsense/stability.hpp"
#include "test_helpers.hpp"

using namespace aptsense;
using testutil::rel_err;

namespace {

const double kS2 = std::sqrt(2.0);

// Independent eigenvalue oracle: direct dense solve on the 6x6.
double max_real_eig_direct(const Mat6& m) {
  Eigen::Matrix<double, 6, 6> A;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) A(r, c) = m[static_cast<size_t>(6 * r + c)];
  Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(A, false);
  double mx = -1e300;
  for (int k = 0; k < 6; ++k) mx = std::max(mx, es.eigenvalues()(k).real());
  return mx;
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("fluctuation matrix structure") {
  SUBCASE("zero Kerr: -gamma diagonal with -Gamma couplings") {
    const auto F = build_fluctuation_matrix({0.5, 1.3, 1.0, 0.0}, 0.0, cxd(2.0, 1.0));
    for (int k = 0; k < 6; ++k) CHECK(F.at(k, k) == -1.3);
    CHECK(F.at(0, 1) == 0.5);
    CHECK(F.at(1, 0) == -0.5);
    CHECK(F.at(4, 5) == -0.5);
    CHECK(F.at(5, 4) == 0.5);
    CHECK(F.at(0, 2) == -1.0);
    CHECK(F.at(2, 0) == -1.0);
    CHECK(F.at(3, 5) == -1.0);
    CHECK(F.at(0, 4) == 0.0);
    CHECK(F.Lambda == cxd(0.0));
    CHECK(F.Sigma == 0.0);
  }
  SUBCASE("real amplitude: Lambda = 0, Xi = 2 U alpha^2, Sigma = 4 U alpha^2") {
    const double U = 1e-6, a = 3.0;
    const auto F = build_fluctuation_matrix({0.0, 1.4, 1.0, 0.0}, U, cxd(a, 0.0));
    CHECK(F.Lambda == cxd(0.0));
    CHECK(rel_err(F.Xi, 2.0 * U * a * a) < 1e-14);
    CHECK(rel_err(F.Sigma, 4.0 * U * a * a) < 1e-14);
  }
  SUBCASE("Lambda stays purely imaginary; Sigma non-negative") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
      const cxd alpha(u(rng), u(rng));
      const auto F = build_fluctuation_matrix({0.2, 1.2, 1.0, 0.0}, 1e-6, alpha);
      CHECK(std::abs(F.Lambda.real()) <= 1e-14 * std::max(std::abs(F.Lambda), 1e-300));
      CHECK(F.Sigma >= 0.0);
    }
  }
  SUBCASE("requires g == 0") {
    CHECK_THROWS_AS(build_fluctuation_matrix({0.0, 1.2, 1.0, 0.1}, 0.0, cxd(0.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("general Jacobian reduces to the block form") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> d(-2.0, 2.0), g(1.0, 2.0), a(-4.0, 4.0);
  for (int k = 0; k < 100; ++k) {
    const AptConfig apt{d(rng), g(rng), 1.0, 0.0};
    const double U = 1e-7 * (1.0 + d(rng));
    const cxd alpha(a(rng), a(rng));
    const auto F = build_fluctuation_matrix(apt, U, alpha);
    SystemParams p = apt.expand();
    p.U_a = U;
    const auto J = quadrature_jacobian(p, {cxd(0.3, -0.1), alpha, cxd(-0.2, 0.4)});
    for (int i = 0; i < 36; ++i)
      CHECK(std::abs(F.m[static_cast<size_t>(i)] - J[static_cast<size_t>(i)]) <=
            1e-13 * std::max(1.0, std::abs(J[static_cast<size_t>(i)])));
  }
}

TEST_CASE("Jacobian matches finite differences of the flow") {
  // Includes the magnon-Kerr extension, the detuned drive and finite g.
  SystemParams p = AptConfig{0.6, 1.35, 1.0, 0.02}.expand();
  p.Delta_a = -0.04;
  p.U_a = 2e-8;
  p.U_b1 = 1e-8;
  p.U_b2 = 4e-9;
  p.Omega = 1.7;
  const Amplitudes v{cxd(1.2, -0.7), cxd(-2.1, 0.4), cxd(0.3, 2.2)};
  const auto J = quadrature_jacobian(p, v);

  const double h = 1e-6;
  const double s2 = std::sqrt(2.0);
  for (int j = 0; j < 6; ++j) {
    Amplitudes vp = v, vm = v;
    // quadrature unit vector: dq = (dv + dv*)/sqrt(2) etc.
    const int mode = j / 2;
    const cxd dv = (j % 2 == 0) ? cxd(h / s2, 0.0) : cxd(0.0, h / s2);
    vp[static_cast<size_t>(mode)] += dv;
    vm[static_cast<size_t>(mode)] -= dv;
    const auto fp = rhs(p, vp);
    const auto fm = rhs(p, vm);
    for (int i = 0; i < 6; ++i) {
      const int imode = i / 2;
      const cxd df = (fp[static_cast<size_t>(imode)] - fm[static_cast<size_t>(imode)]) / (2.0 * h);
      // project back onto quadratures: q-row takes sqrt(2) Re, p-row sqrt(2) Im
      const double got = (i % 2 == 0) ? s2 * df.real() : s2 * df.imag();
      CHECK(std::abs(got - J[static_cast<size_t>(6 * i + j)]) <= 1e-6 * std::max(1.0, std::abs(got)));
    }
  }
}

TEST_CASE("characteristic polynomial, frozen Kerr point") {
  // alpha from the linear response at Delta=0.5, gamma=1.3, Omega=0.2
  const cxd alpha(-4.9743589743589895, 0.0);
  const auto F = build_fluctuation_matrix({0.5, 1.3, 1.0, 0.0}, 1e-6, alpha);
  const auto poly = characteristic_polynomial(F.m);
  const double want[7] = {1.0,
                          7.7999999999999989,
                          21.850000007347326,
                          25.740000038206126,
                          10.414000078175627,
                          -0.51791992588009628,
                          0.0060840276524232340};
  for (int k = 0; k < 7; ++k)
    CHECK(rel_err(poly[static_cast<size_t>(k)], want[k]) < 1e-9);

  const auto roots = companion_roots(poly);
  CHECK(rel_err(roots[0].real(), 0.022875655078902241) < 1e-8);
  // the polynomial vanishes on its own companion roots
  for (const auto& r : roots) {
    cxd acc(0.0);
    for (int k = 0; k < 7; ++k) acc = acc * r + poly[static_cast<size_t>(k)];
    CHECK(std::abs(acc) < 1e-8);
  }
}

TEST_CASE("companion roots of frozen polynomials") {
  // roots {-1, -2, -3 +- i, 0.5, -0.25}
  const Poly6 unstable{1.0, 8.75, 27.625, 33.375, 5.75, -10.25, -2.5};
  const auto r = companion_roots(unstable);
  CHECK(rel_err(r[0].real(), 0.5) < 1e-8);
  CHECK(!routh_array_stable(unstable));

  // roots {-0.5, -1.5, -2 +- 0.7i, -0.1, -3}
  const Poly6 stable{1.0, 9.1, 32.14, 54.824, 44.4775, 14.03325, 1.01025};
  CHECK(companion_roots(stable)[0].real() < 0.0);
  CHECK(routh_array_stable(stable));
}

TEST_CASE("verdicts") {
  SUBCASE("decoupled negative diagonal") {
    Mat6 m{};
    for (int k = 0; k < 6; ++k) m[static_cast<size_t>(7 * k)] = -(k + 1.0);
    const auto v = stability_from_jacobian(m, 1.0);
    CHECK(v.stable);
    CHECK(v.routh_stable);
    CHECK(v.method_agreement);
    CHECK(!v.marginal);
    CHECK(rel_err(v.max_real_part, -1.0) < 1e-10);
  }
  SUBCASE("suppression point is marginal") {
    const auto F = build_fluctuation_matrix({0.0, kS2, 1.0, 0.0}, 0.0, cxd(0.0));
    const auto v = routh_hurwitz_stable(F);
    CHECK(v.marginal);
    CHECK(std::abs(v.max_real_part) < 1e-9);
  }
  SUBCASE("interior of the stable region") {
    const auto F = build_fluctuation_matrix({0.0, 1.5, 1.0, 0.0}, 0.0, cxd(0.0));
    const auto v = routh_hurwitz_stable(F);
    CHECK(v.stable);
    CHECK(v.routh_stable);
    CHECK(!v.marginal);
    // max Re = -gamma + sqrt(2) from the closed-form spectrum
    CHECK(rel_err(v.max_real_part, kS2 - 1.5) < 1e-9);
  }
  SUBCASE("inside the E_p < 0 ellipse: unstable") {
    const auto F = build_fluctuation_matrix({0.0, 1.2, 1.0, 0.0}, 0.0, cxd(0.0));
    const auto v = routh_hurwitz_stable(F);
    CHECK(!v.stable);
    CHECK(!v.routh_stable);
    CHECK(v.method_agreement);
  }
}

TEST_CASE("the two methods agree off the marginal band") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> d(-3.0, 3.0), g(1.0, 2.0);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    const auto F = build_fluctuation_matrix({d(rng), g(rng), 1.0, 0.0}, 0.0, cxd(0.0));
    const auto v = routh_hurwitz_stable(F);
    if (v.marginal) continue;
    CHECK(v.method_agreement);
    ++checked;
  }
  CHECK(checked > 250);
}

TEST_CASE("companion route vs direct dense eigensolver") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> d(-3.0, 3.0), g(1.0, 2.0), a(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const auto F =
        build_fluctuation_matrix({d(rng), g(rng), 1.0, 0.0}, 1e-7, cxd(a(rng), a(rng)));
    const auto v = stability_from_jacobian(F.m, 1.0);
    CHECK(std::abs(v.max_real_part - max_real_eig_direct(F.m)) < 1e-8);
  }
}

TEST_CASE("quadrature real parts double the coupling-matrix linewidths") {
  // at U = 0 the 6x6 spectrum is {-i lambda_k} plus conjugates
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> d(-3.0, 3.0), g(1.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const AptConfig apt{d(rng), g(rng), 1.0, 0.0};
    const auto F = build_fluctuation_matrix(apt, 0.0, cxd(0.0));
    const auto roots = companion_roots(characteristic_polynomial(F.m));
    std::array<double, 6> re6;
    for (int j = 0; j < 6; ++j) re6[static_cast<size_t>(j)] = roots[static_cast<size_t>(j)].real();
    std::sort(re6.begin(), re6.end());
    const auto s = eigenvalues_closed_form(apt);
    std::array<double, 6> im6;
    for (int j = 0; j < 3; ++j)
      im6[static_cast<size_t>(2 * j)] = im6[static_cast<size_t>(2 * j + 1)] =
          s.lambdas[static_cast<size_t>(j)].imag();
    std::sort(im6.begin(), im6.end());
    for (int j = 0; j < 6; ++j)
      CHECK(std::abs(re6[static_cast<size_t>(j)] - im6[static_cast<size_t>(j)]) <= 1e-9);
  }
}

TEST_CASE("branch classification of the frozen bistable triple") {
  const AptConfig apt{0.0, kS2, 1.0, 0.0};
  auto bs = cavity_branches(apt, 0.1, 1e-12, 3e7);
  bs = classify_branch_stability(std::move(bs), apt, 0.1, KerrMode::Cavity, 1e-12);
  REQUIRE(bs.roots.size() == 3);
  CHECK(bs.roots[0].stable);
  CHECK(!bs.roots[1].stable);
  CHECK(bs.roots[2].stable);
  CHECK(!bs.roots[1].marginal);
}

}  // TEST_SUITE

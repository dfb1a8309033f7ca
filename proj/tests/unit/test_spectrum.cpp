#include <doctest.h>

#include <cmath>
#include <random>

#include "aptsense/spectrum.hpp"
#include "test_helpers.hpp"

using namespace aptsense;
using testutil::rel_err;

namespace {

double set_distance(const std::array<cxd, 3>& a, const std::array<cxd, 3>& b) {
  const auto matched = match_branches(a, b);
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(a[size_t(k)] - matched[size_t(k)]));
  return d;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("matrix entries") {
  const double s2 = std::sqrt(2.0);
  SUBCASE("balanced, g = 0, Delta = 0: uniform -i gamma diagonal, -i Gamma links") {
    const auto M = build_matrix(AptConfig{0.0, s2, 1.0, 0.0}.expand());
    for (int k = 0; k < 3; ++k) CHECK(std::abs(M.at(k, k) - cxd(0.0, -s2)) < 1e-15);
    CHECK(M.at(0, 1) == cxd(0.0, -1.0));
    CHECK(M.at(1, 0) == cxd(0.0, -1.0));
    CHECK(M.at(1, 2) == cxd(0.0, -1.0));
    CHECK(M.at(2, 1) == cxd(0.0, -1.0));
    CHECK(M.at(0, 2) == cxd(0.0));
    CHECK(M.at(2, 0) == cxd(0.0));
  }
  SUBCASE("coherent coupling lands on the links as g - i Gamma") {
    const auto M = build_matrix(AptConfig{0.0, s2, 1.0, 0.25}.expand());
    CHECK(M.at(0, 1) == cxd(0.25, -1.0));
    CHECK(M.at(2, 1) == cxd(0.25, -1.0));
  }
  SUBCASE("antisymmetric detuning splits the magnon diagonal by 2 Delta") {
    const auto M = build_matrix(AptConfig{0.7, 1.3, 1.0, 0.0}.expand());
    CHECK(rel_err((M.at(0, 0) - M.at(2, 2)).real(), 1.4) < 1e-14);
    CHECK(std::abs((M.at(0, 0) - M.at(2, 2)).imag()) < 1e-15);
  }
}

TEST_CASE("anti-PT defect") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-3.0, 3.0), g(1.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const auto M = build_matrix(AptConfig{d(rng), g(rng), 1.0, 0.0}.expand());
    CHECK(apt_defect(M) <= 1e-12);
  }
  // a coherent coupling breaks the symmetry
  const auto M = build_matrix(AptConfig{0.5, 1.3, 1.0, 0.1}.expand());
  CHECK(apt_defect(M) > 0.1);
}

TEST_CASE("closed form: coalescence and suppression") {
  const double s2 = std::sqrt(2.0);
  SUBCASE("triple coalescence at Delta = sqrt(2)") {
    const auto s = eigenvalues_closed_form({s2, s2, 1.0, 0.0});
    for (const auto& l : s.lambdas) CHECK(std::abs(l - cxd(0.0, -s2)) < 1e-7);
    CHECK(s.phase == Phase::EP);
  }
  SUBCASE("unique zero-linewidth point at Delta = 0, gamma = sqrt(2)") {
    const auto s = eigenvalues_closed_form({0.0, s2, 1.0, 0.0});
    CHECK(std::abs(s.lambdas[0]) < 1e-15);  // sorted rule puts it first
    CHECK(std::abs(s.lambdas[1].real()) < 1e-15);
    CHECK(std::abs(s.lambdas[2].real()) < 1e-15);
    CHECK(s.suppression_gap < 1e-15);
  }
  SUBCASE("Delta = Gamma, gamma = sqrt(2) Gamma") {
    const auto s = eigenvalues_closed_form({1.0, s2, 1.0, 0.0});
    bool found = false;
    for (const auto& l : s.lambdas) found |= std::abs(l - cxd(0.0, -(s2 - 1.0))) < 1e-12;
    CHECK(found);
  }
}

TEST_CASE("lambda_2 = -i gamma for all Delta and g") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> d(-3.0, 3.0), g(1.0, 2.0), c(-0.2, 0.2);
  for (int k = 0; k < 200; ++k) {
    const AptConfig apt{d(rng), g(rng), 1.0, c(rng)};
    const auto s = eigenvalues_closed_form(apt);
    bool found = false;
    for (const auto& l : s.lambdas) found |= std::abs(l - cxd(0.0, -apt.gamma)) <= 1e-10;
    CHECK(found);
  }
}

TEST_CASE("closed form vs numeric eigenvalues, g = 0.03 frozen point") {
  // frozen against an independent numpy eigensolver
  const AptConfig apt{0.5, 1.3, 1.0, 0.03};
  const auto cf = eigenvalues_closed_form(apt);
  const auto nm = eigenvalues_numeric(build_matrix(apt.expand()));
  CHECK(set_distance(cf.lambdas, nm.lambdas) < 1e-12);
  CHECK(std::abs(cf.lambdas[0] - cxd(0.045352408781149, -2.622972728737162)) < 1e-12);
  CHECK(std::abs(cf.lambdas[1] - cxd(0.0, -1.3)) < 1e-12);
  CHECK(std::abs(cf.lambdas[2] - cxd(-0.045352408781149, 0.022972728737162)) < 1e-12);
}

TEST_CASE("closed form vs numeric over the (Delta, gamma) grid") {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double Delta = -3.0 + 6.0 * i / 99.0;
      const double gamma = 1.0 + 1.0 * j / 99.0;
      const AptConfig apt{Delta, gamma, 1.0, 0.0};
      const auto cf = eigenvalues_closed_form(apt);
      const auto nm = eigenvalues_numeric(build_matrix(apt.expand()));
      worst = std::max(worst, set_distance(cf.lambdas, nm.lambdas));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("numeric eigenvalues: diagonal case and residuals") {
  SUBCASE("diagonal matrix") {
    CouplingMatrix M;
    M.at(0, 0) = cxd(1.0, -0.5);
    M.at(1, 1) = cxd(-2.0, 0.25);
    M.at(2, 2) = cxd(0.5, 3.0);
    const auto s = eigenvalues_numeric(M);
    const std::array<cxd, 3> expect{cxd(1.0, -0.5), cxd(0.5, 3.0), cxd(-2.0, 0.25)};
    CHECK(set_distance(expect, s.lambdas) < 1e-13);
  }
  SUBCASE("random matrices satisfy the determinant residual bound") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
      CouplingMatrix M;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) M.at(r, c) = cxd(u(rng), u(rng));
      const double nrm = M.frobenius_norm();
      for (const auto& l : eigenvalues_numeric(M).lambdas) {
        // det(M - lambda I) via cofactor expansion
        std::array<cxd, 9> A = M.m;
        A[0] -= l;
        A[4] -= l;
        A[8] -= l;
        const cxd det = A[0] * (A[4] * A[8] - A[5] * A[7]) - A[1] * (A[3] * A[8] - A[5] * A[6]) +
                        A[2] * (A[3] * A[7] - A[4] * A[6]);
        CHECK(std::abs(det) <= 1e-8 * nrm * nrm * nrm);
      }
    }
  }
}

TEST_CASE("spectral antisymmetry in the anti-PT phase") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> d(-1.3, 1.3), g(1.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const AptConfig apt{d(rng), g(rng), 1.0, 0.0};
    const auto s = eigenvalues_numeric(build_matrix(apt.expand()));
    std::array<cxd, 3> mirrored;
    for (int j = 0; j < 3; ++j) mirrored[size_t(j)] = -std::conj(s.lambdas[size_t(j)]);
    CHECK(set_distance(s.lambdas, mirrored) <= 1e-10);
  }
}

TEST_CASE("suppression detunings") {
  const double s2m1 = std::sqrt(2.0) - 1.0;
  SUBCASE("lossless magnons: singularities at +-Gamma") {
    const auto v = suppression_detunings(0.0, 1.0);
    REQUIRE(v.size() == 2);
    CHECK(rel_err(v[0], 1.0) < 1e-14);
    CHECK(rel_err(v[1], -1.0) < 1e-14);
  }
  SUBCASE("boundary decay rate: unique point at zero") {
    const auto v = suppression_detunings(s2m1, 1.0);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == 0.0);
  }
  SUBCASE("beyond the admissible range: empty") {
    CHECK(suppression_detunings(0.5, 1.0).empty());
    CHECK(suppression_detunings(-0.1, 1.0).empty());
  }
  SUBCASE("substituted into E_p with gamma = gamma_b + Gamma gives zero") {
    for (int k = 0; k <= 50; ++k) {
      const double gb = s2m1 * k / 50.0;
      for (double Delta : suppression_detunings(gb, 1.0))
        CHECK(std::abs(ep_condition({Delta, gb + 1.0, 1.0, 0.0})) <= 1e-10);
    }
  }
}

TEST_CASE("phase classification") {
  CHECK(classify_phase({0.0, 1.2, 1.0, 0.0}) == Phase::APT);
  CHECK(classify_phase({2.0, 1.2, 1.0, 0.0}) == Phase::APTB);
  CHECK(classify_phase({std::sqrt(2.0), 1.2, 1.0, 0.0}) == Phase::EP);
  CHECK_THROWS_AS(classify_phase({0.0, 1.2, 1.0, 0.1}), std::invalid_argument);

  // numeric spectra agree with the analytic classification away from the EP
  const auto apt_s = eigenvalues_numeric(build_matrix(AptConfig{0.5, 1.2, 1.0, 0.0}.expand()));
  CHECK(apt_s.phase == Phase::APT);
  const auto aptb_s = eigenvalues_numeric(build_matrix(AptConfig{2.5, 1.2, 1.0, 0.0}.expand()));
  CHECK(aptb_s.phase == Phase::APTB);
}

TEST_CASE("branch matching reorders a permuted triple") {
  const std::array<cxd, 3> prev{cxd(1.0, 0.0), cxd(0.0, 1.0), cxd(-1.0, -1.0)};
  const std::array<cxd, 3> cur{cxd(-1.02, -1.0), cxd(1.01, 0.0), cxd(0.0, 0.98)};
  const auto m = match_branches(prev, cur);
  CHECK(std::abs(m[0] - cxd(1.01, 0.0)) < 1e-12);
  CHECK(std::abs(m[1] - cxd(0.0, 0.98)) < 1e-12);
  CHECK(std::abs(m[2] - cxd(-1.02, -1.0)) < 1e-12);
}

}  // TEST_SUITE

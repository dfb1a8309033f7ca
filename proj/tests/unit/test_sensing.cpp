#include <doctest.h>

#include <cmath>
#include <vector>

#include "aptsense/sensing.hpp"
#include "test_helpers.hpp"

using namespace aptsense;
using testutil::rel_err;

namespace {

const double kS2 = std::sqrt(2.0);
const AptConfig kSuppr{0.0, kS2, 1.0, 0.0};
const double kI8uW = 496746.81251600728;
const double kI8mW = 496746812.51600728;

// Implicit differentiation of the resonant cavity cubic:
// F = 4U^2 x^3 + c1 x - I = 0  =>  dx/dU = -8 U x^3 / (12 U^2 x^2 + c1).
double cavity_dxdU_exact(const AptConfig& apt, double U, double I) {
  const auto c = cavity_cubic_coeffs(apt, 0.0, U);
  const auto bs = solve_response_cubic(c, I);
  const double x = bs.roots.back().response;
  return -8.0 * U * x * x * x / (12.0 * U * U * x * x + c.c1);
}

}  // namespace

TEST_SUITE("sensing") {

TEST_CASE("response ratio at the suppression point") {
  SUBCASE("tenfold Kerr ratio gives 10^(2/3), independent of power") {
    for (double I : {kI8uW, kI8mW}) {
      const auto rr = response_ratio(kSuppr, 0.0, 1e-13, 1e-12, I, KerrMode::Cavity);
      CHECK(rel_err(rr.eta, std::pow(10.0, 2.0 / 3.0)) <= 1e-9);
      CHECK(rr.small_tag.regime == Regime::MONOSTABLE);
      CHECK(rr.large_tag.regime == Regime::MONOSTABLE);
    }
  }
  SUBCASE("equal Kerr strengths give unity") {
    const auto rr = response_ratio(kSuppr, 0.0, 1e-13, 1e-13, kI8uW, KerrMode::Cavity);
    CHECK(rel_err(rr.eta, 1.0) < 1e-12);
  }
  SUBCASE("invariant under a joint rescale of the pair") {
    const auto a = response_ratio(kSuppr, 0.0, 1e-14, 1e-13, kI8mW, KerrMode::Cavity);
    const auto b = response_ratio(kSuppr, 0.0, 3e-14, 3e-13, kI8mW, KerrMode::Cavity);
    CHECK(rel_err(a.eta, b.eta) <= 1e-9);
  }
  SUBCASE("magnon scenario gives the same enhancement") {
    const auto rr = response_ratio(kSuppr, 0.0, 1e-13, 1e-12, kI8uW, KerrMode::Magnon);
    CHECK(rel_err(rr.eta, std::pow(10.0, 2.0 / 3.0)) <= 1e-9);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(response_ratio(kSuppr, 0.0, 0.0, 1e-12, kI8uW, KerrMode::Cavity),
                    std::invalid_argument);
    CHECK_THROWS_AS(response_ratio(kSuppr, 0.0, 1e-12, 1e-13, kI8uW, KerrMode::Cavity),
                    std::invalid_argument);
  }
}

TEST_CASE("bistable endpoints are tagged") {
  // at delta = 0.1 and 8 mW the small-Kerr endpoint has three roots
  const auto rr = response_ratio(kSuppr, 0.1, 1e-13, 1e-12, kI8mW, KerrMode::Cavity);
  CHECK(rr.small_tag.regime == Regime::BISTABLE);
  CHECK(rr.small_tag.root_count == 3);
  CHECK(rr.large_tag.regime == Regime::MONOSTABLE);
}

TEST_CASE("tracked branch follows continuity into the bistable window") {
  const TrackedResponse t = tracked_response(kSuppr, 0.1, 1e-12, 3e7, KerrMode::Cavity);
  const auto bs = cavity_branches(kSuppr, 0.1, 1e-12, 3e7);
  REQUIRE(bs.roots.size() == 3);
  CHECK(rel_err(t.response, bs.roots.back().response) < 1e-12);
  CHECK(t.tag.root_count == 3);
}

TEST_CASE("finite-difference sensitivity") {
  SUBCASE("matches the analytic derivative at the suppression point") {
    for (double U : {1e-14, 1e-13}) {
      const auto fd = sensitivity_fd(kSuppr, U, kI8uW, KerrMode::Cavity);
      REQUIRE(fd.valid);
      const double want = -(2.0 / 3.0) * std::cbrt(kI8uW / 4.0) * std::pow(U, -5.0 / 3.0);
      CHECK(rel_err(fd.derivative, want) <= 1e-4);
    }
  }
  SUBCASE("power-law step: doubling U scales the derivative by 2^(-5/3)") {
    const auto a = sensitivity_fd(kSuppr, 1e-13, kI8uW, KerrMode::Cavity);
    const auto b = sensitivity_fd(kSuppr, 2e-13, kI8uW, KerrMode::Cavity);
    REQUIRE(a.valid);
    REQUIRE(b.valid);
    CHECK(rel_err(b.derivative / a.derivative, std::pow(2.0, -5.0 / 3.0)) <= 1e-3);
  }
  SUBCASE("off the singularity the derivative approaches the Kerr-shift slope") {
    const AptConfig apt{0.0, 1.5, 1.0, 0.0};  // E_p = 0.25
    const double U = 1e-12;
    const auto fd = sensitivity_fd(apt, U, kI8uW, KerrMode::Cavity);
    REQUIRE(fd.valid);
    CHECK(rel_err(fd.derivative, cavity_dxdU_exact(apt, U, kI8uW)) <= 1e-4);
    // finite, far below the suppression-point divergence scale
    CHECK(std::abs(fd.derivative) <
          0.01 * (2.0 / 3.0) * std::cbrt(kI8uW / 4.0) * std::pow(U, -5.0 / 3.0));
  }
  SUBCASE("rejects non-positive U") {
    CHECK_THROWS_AS(sensitivity_fd(kSuppr, 0.0, kI8uW, KerrMode::Cavity),
                    std::invalid_argument);
  }
}

TEST_CASE("log-log fit") {
  SUBCASE("synthetic power law is recovered exactly") {
    std::vector<double> u, v;
    for (int k = 0; k < 10; ++k) {
      const double uk = std::pow(10.0, -14.0 + 0.25 * k);
      u.push_back(uk);
      v.push_back(std::pow(uk, -2.0));
    }
    CHECK(rel_err(fit_loglog_slope(u, v), -2.0) < 1e-10);
  }
  SUBCASE("scaling exponent at the suppression point: cavity and magnon") {
    std::vector<double> grid;
    for (int k = 0; k < 12; ++k) grid.push_back(std::pow(10.0, -14.0 + 2.0 * k / 11.0));
    const double ec = fit_scaling_exponent(kSuppr, grid, kI8uW, KerrMode::Cavity);
    const double em = fit_scaling_exponent(kSuppr, grid, kI8uW, KerrMode::Magnon);
    CHECK(std::abs(ec + 5.0 / 3.0) <= 0.05);
    CHECK(std::abs(em + 5.0 / 3.0) <= 0.05);
    CHECK(std::abs(ec - em) <= 0.02);
  }
  SUBCASE("refuses to fit fewer than 8 points") {
    std::vector<double> grid{1e-14, 1e-13, 1e-12};
    CHECK_THROWS_AS(fit_scaling_exponent(kSuppr, grid, kI8uW, KerrMode::Cavity),
                    std::invalid_argument);
  }
}

TEST_CASE("sensitivity report bundles the observables") {
  std::vector<double> grid;
  for (int k = 0; k < 9; ++k) grid.push_back(std::pow(10.0, -14.0 + 2.0 * k / 8.0));
  const auto rep =
      sensitivity_report(kSuppr, 0.0, 1e-13, 1e-12, kI8uW, grid, KerrMode::Cavity);
  CHECK(rel_err(rep.eta, std::pow(10.0, 2.0 / 3.0)) < 1e-6);
  CHECK(std::abs(rep.scaling_exponent + 5.0 / 3.0) <= 0.05);
  CHECK(rep.dresponse_dU < 0.0);
}

}  // TEST_SUITE

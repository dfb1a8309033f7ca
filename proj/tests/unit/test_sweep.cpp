#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aptsense/constants.hpp"
#include "aptsense/figures.hpp"
#include "aptsense/sweep.hpp"
#include "test_helpers.hpp"

using namespace aptsense;
using testutil::rel_err;

namespace {

const char* kDemoConfig = R"cfg(
# demo: eigenvalues and response along the magnon detuning
[parameters]
Gamma = 1 MHz
kappa_minus = 0.05 Gamma
gamma = 1.41421356237309515 Gamma
U_a = 1 nHz
power = 8 uW
wavelength = 1550 nm

[axis1]
param = Delta
min = -3 Gamma
max = 3 Gamma
points = 61

[output]
observables = eigenvalues, ep, x, stability, regime
format = csv
seed = 7
threads = 1
)cfg";

bool rows_identical(const SweepResult& a, const SweepResult& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (size_t r = 0; r < a.rows.size(); ++r) {
    if (a.rows[r].tag != b.rows[r].tag) return false;
    if (a.rows[r].values.size() != b.rows[r].values.size()) return false;
    for (size_t c = 0; c < a.rows[r].values.size(); ++c) {
      const double x = a.rows[r].values[c], y = b.rows[r].values[c];
      if (std::isnan(x) != std::isnan(y)) return false;
      if (!std::isnan(x) && x != y) return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("config parsing") {
  SUBCASE("units resolve to angular rates") {
    const SweepSpec spec = parse_config(kDemoConfig);
    CHECK(rel_err(spec.parameters.at("Gamma"), constants::two_pi * 1e6) < 1e-15);
    CHECK(rel_err(spec.parameters.at("U_a"), constants::two_pi * 1e-9) < 1e-15);
    CHECK(rel_err(spec.parameters.at("kappa_minus"), 0.05 * constants::two_pi * 1e6) < 1e-15);
    CHECK(spec.parameters.at("power") == 8e-6);
    CHECK(spec.parameters.at("wavelength") == 1550e-9);
    CHECK(spec.axis1.param == "Delta");
    CHECK(spec.axis1.points == 61);
    CHECK(spec.seed == 7);
  }
  SUBCASE("missing axis is an error") {
    CHECK_THROWS_WITH_AS(parse_config("[parameters]\nGamma = 1 MHz\n"),
                         doctest::Contains("no sweep axis"), ConfigError);
  }
  SUBCASE("unknown keys, units and observables are hard errors with line numbers") {
    try {
      parse_config("[parameters]\nGamma = 1 MHz\nbogus = 2 MHz\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("[parameters]\nGamma = 1 parsec\n[axis1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[parameters]\nGamma = abc MHz\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_config("[axis1]\nparam = Delta\nmin = 0 Gamma\nmax = 1 Gamma\npoints = 1\n"),
        ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kDemoConfig) + "[output]\nobservables = banana\n"),
                    ConfigError);
  }
  SUBCASE("round trip is exact") {
    const SweepSpec a = parse_config(kDemoConfig);
    const std::string text = emit_config(a);
    const SweepSpec b = parse_config(text);
    CHECK(a.parameters == b.parameters);
    CHECK(a.axis1.param == b.axis1.param);
    CHECK(a.axis1.min == b.axis1.min);
    CHECK(a.axis1.max == b.axis1.max);
    CHECK(a.axis1.points == b.axis1.points);
    CHECK(a.observables == b.observables);
    CHECK(a.seed == b.seed);
    CHECK(emit_config(b) == text);
  }
}

TEST_CASE("table io round trips bitwise") {
  const SweepSpec spec = parse_config(kDemoConfig);
  const SweepResult r = run_sweep(spec);
  SUBCASE("csv") {
    std::stringstream ss;
    write_csv(r, ss);
    const SweepResult rr = read_csv(ss);
    CHECK(rr.metadata == r.metadata);
    REQUIRE(rr.header.size() == r.header.size());
    for (size_t k = 0; k < r.header.size(); ++k) {
      CHECK(rr.header[k].name == r.header[k].name);
      CHECK(rr.header[k].unit == r.header[k].unit);
    }
    CHECK(rows_identical(r, rr));
  }
  SUBCASE("json") {
    std::stringstream ss;
    write_json(r, ss);
    const SweepResult rr = read_json(ss);
    CHECK(rr.metadata == r.metadata);
    CHECK(rows_identical(r, rr));
  }
}

TEST_CASE("sweep engine basics") {
  const SweepSpec spec = parse_config(kDemoConfig);
  const SweepResult r = run_sweep(spec);
  CHECK(r.rows.size() == 61);
  REQUIRE(r.column("Delta") == 0);
  REQUIRE(r.column("x") >= 0);
  REQUIRE(r.column("Ep") >= 0);
  CHECK(r.metadata.contains("param.Gamma"));
  CHECK(r.metadata.at("seed") == "7");
  for (const auto& row : r.rows) CHECK(row.values.size() == r.header.size());

  SUBCASE("eigenvalue branches stay continuous through the EPs") {
    const int c0 = r.column("Re_lambda1");
    REQUIRE(c0 > 0);
    for (size_t k = 1; k < r.rows.size(); ++k) {
      for (int j = 0; j < 6; ++j) {
        const double a = r.rows[k - 1].values[static_cast<size_t>(c0 + j)];
        const double b = r.rows[k].values[static_cast<size_t>(c0 + j)];
        CHECK(std::abs(a - b) < 0.35);  // grid step 0.1; smooth branch motion
      }
    }
  }
  SUBCASE("row values match a direct evaluation") {
    // Delta = 0 row: gamma = sqrt(2), so E_p = 0 and the response is the
    // suppression-point cubic root
    const auto& row = r.rows[30];
    CHECK(row.values[0] == 0.0);
    CHECK(std::abs(row.values[static_cast<size_t>(r.column("Ep"))]) < 1e-12);
    const double I = 496746.81251600728;
    const double want = std::cbrt(I / (4.0 * 1e-15 * 1e-15));
    CHECK(rel_err(row.values[static_cast<size_t>(r.column("x"))], want) < 1e-9);
  }
}

TEST_CASE("two-dimensional sweeps are deterministic across thread counts") {
  SweepSpec spec = parse_config(kDemoConfig);
  spec.axis1.points = 21;
  spec.axis2 = AxisSpec{"gamma", spec.parameters.at("Gamma"), 2.0 * spec.parameters.at("Gamma"), 7};
  spec.observables = {"ep", "x", "stability", "regime"};
  spec.threads = 1;
  const SweepResult a = run_sweep(spec);
  CHECK(a.rows.size() == 21 * 7);
  spec.threads = 4;
  const SweepResult b = run_sweep(spec);
  // identical bytes modulo the recorded thread count
  auto ma = a.metadata, mb = b.metadata;
  ma.erase("threads");
  mb.erase("threads");
  CHECK(ma == mb);
  CHECK(rows_identical(a, b));
}

TEST_CASE("eta observable") {
  SweepSpec spec = parse_config(kDemoConfig);
  spec.axis1 = AxisSpec{"Delta_a", 0.0, 0.05 * spec.parameters.at("Gamma"), 3};
  spec.observables = {"eta"};
  spec.parameters["power"] = 8e-3;
  spec.parameters["U_a"] = constants::two_pi * 1e-7;
  spec.parameters["Delta"] = 0.0;
  const SweepResult r = run_sweep(spec);
  REQUIRE(r.column("eta") == 1);
  CHECK(rel_err(r.rows[0].values[1], std::pow(10.0, 2.0 / 3.0)) < 1e-6);
  CHECK(r.rows[2].values[1] > 5.5);  // detuned enhancement
}

TEST_CASE("figure runners") {
  SUBCASE("fig2 marks the EPs and the zero-linewidth points") {
    const SweepResult a = run_fig2(std::sqrt(2.0), 121);
    CHECK(a.rows.size() == 121);
    CHECK(std::abs(std::stod(a.metadata.at("ep_detuning_pos")) - std::sqrt(2.0)) <= 1e-6);
    CHECK(a.metadata.at("suppression_detunings") == "0");

    const SweepResult b = run_fig2(1.0, 121);
    const std::string marks = b.metadata.at("suppression_detunings");
    CHECK(marks.find("0.9999999") != std::string::npos);
    CHECK(marks.find("-0.9999999") != std::string::npos);
  }
  SUBCASE("fig3a boundary column reproduces the E_p = 0 ellipse") {
    const SweepResult r = run_fig3a(31, 21);
    CHECK(r.rows.size() == 31 * 21);
    const int cb = r.column("boundary_delta_pos");
    const int cg = r.column("gamma");
    REQUIRE(cb > 0);
    int boundary_rows = 0;
    for (const auto& row : r.rows) {
      const double bd = row.values[static_cast<size_t>(cb)];
      if (std::isnan(bd)) continue;
      const double gamma = row.values[static_cast<size_t>(cg)];
      CHECK(std::abs(ep_condition({bd, gamma, 1.0, 0.0})) <= 1e-10);
      ++boundary_rows;
    }
    CHECK(boundary_rows > 0);
    // interior of the ellipse is tagged, not reported as a response
    bool saw_unstable = false;
    const int cx = r.column("x");
    for (const auto& row : r.rows)
      if (row.tag == "UNSTABLE") {
        saw_unstable = true;
        CHECK(std::isnan(row.values[static_cast<size_t>(cx)]));
      }
    CHECK(saw_unstable);
  }
  SUBCASE("fig3b peak ratio and broadening") {
    const SweepResult r = run_fig3b(KerrMode::Cavity, 201);
    CHECK(std::abs(std::stod(r.metadata.at("peak_ratio_8uW")) - 4.6416) <= 0.01);
    CHECK(std::abs(std::stod(r.metadata.at("peak_ratio_8mW")) - 4.6416) <= 0.01);
    CHECK(std::stod(r.metadata.at("fwhm_u1nHz_8mW")) >
          std::stod(r.metadata.at("fwhm_u1nHz_8uW")));
    // response even in Delta
    const int cx = r.column("x_u1nHz_8uW");
    REQUIRE(cx > 0);
    const size_t n = r.rows.size();
    for (size_t k = 0; k < n / 2; ++k)
      CHECK(rel_err(r.rows[k].values[static_cast<size_t>(cx)],
                    r.rows[n - 1 - k].values[static_cast<size_t>(cx)]) < 1e-9);
  }
  SUBCASE("fig3c monostable window and negative detunings") {
    const SweepResult r = run_fig3c(KerrMode::Cavity, 101);
    const double eta0 = std::stod(r.metadata.at("eta_at_zero"));
    CHECK(std::abs(eta0 - 4.6416) <= 0.01);
    const double emax = std::stod(r.metadata.at("eta_max_monostable_window"));
    CHECK(emax >= 6.0);
    CHECK(emax <= 8.0);
    const int ce = r.column("eta");
    for (const auto& row : r.rows)
      if (row.values[0] < 0.0) CHECK(row.values[static_cast<size_t>(ce)] < emax);
  }
  SUBCASE("fig4 reduces to the uncoupled response at g = 0") {
    const SweepResult r = run_fig4(0.0, 41);
    const AptConfig apt{r.rows[7].values[0], std::sqrt(2.0), 1.0, 0.0};
    const double U = constants::two_pi * 1e-7 / (constants::two_pi * 1e6);
    const double I = figure_defaults().intensity(8e-6);
    const auto bs = cavity_branches(apt, 0.0, U, I);
    CHECK(rel_err(r.rows[7].values[1], bs.roots.front().response) < 1e-9);
  }
}

}  // TEST_SUITE

// Command-line front end: parameter sweeps, figure-ready tables, and
// single-point spectrum / steady-state / stability / dynamics queries.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "aptsense/dynamics.hpp"
#include "aptsense/figures.hpp"
#include "aptsense/sensing.hpp"
#include "aptsense/spectrum.hpp"
#include "aptsense/stability.hpp"
#include "aptsense/sweep.hpp"

namespace {

using namespace aptsense;

struct CommonOpts {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_config = true) {
  if (with_config) cmd->add_option("--config", o.config, "run-configuration file");
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "seed for perturbation directions");
  cmd->add_option("--threads", o.threads, "worker threads for grid evaluation")
      ->check(CLI::PositiveNumber);
}

int emit(const SweepResult& r, const CommonOpts& o) {
  const OutputFormat f = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (o.out.empty()) {
    if (f == OutputFormat::Csv) write_csv(r, std::cout);
    else write_json(r, std::cout);
  } else {
    write_table(r, o.out, f);
    std::cerr << "wrote " << r.rows.size() << " rows to " << o.out << "\n";
  }
  for (const auto& row : r.rows)
    if (row.tag == "NONCONVERGED" || row.tag == "SINGULAR") return 3;
  return 0;
}

struct PointOpts {
  double Delta = 0.0;          // Gamma units
  double gamma = std::sqrt(2.0);
  double g = 0.0;
  double detuning = 0.0;       // drive detuning, Gamma units
  double U = 0.0;              // Kerr coefficient, Gamma units
  std::string which = "cavity";
  double power = 8e-6;         // W; converted via the caption defaults
  double intensity = -1.0;     // Gamma^2 units; overrides power when >= 0
};

void add_point(CLI::App* cmd, PointOpts& o, bool with_kerr = true) {
  cmd->add_option("--Delta", o.Delta, "magnon detuning [Gamma]");
  cmd->add_option("--gamma", o.gamma, "effective linewidth [Gamma]");
  cmd->add_option("--g", o.g, "coherent coupling [Gamma]");
  if (with_kerr) {
    cmd->add_option("--detuning", o.detuning, "drive detuning [Gamma]");
    cmd->add_option("--U", o.U, "Kerr coefficient [Gamma]");
    cmd->add_option("--which", o.which, "cavity|magnon")
        ->check(CLI::IsMember({"cavity", "magnon"}));
    cmd->add_option("--power", o.power, "drive power [W]");
    cmd->add_option("--intensity", o.intensity, "drive intensity [Gamma^2], overrides power");
  }
}

double point_intensity(const PointOpts& o) {
  if (o.intensity >= 0.0) return o.intensity;
  return figure_defaults().intensity(o.power);
}

int cmd_spectrum(const PointOpts& o) {
  const AptConfig apt{o.Delta, o.gamma, 1.0, o.g};
  const auto numeric = eigenvalues_numeric(build_matrix(apt.expand()));
  std::printf("coupling-matrix eigenvalues (Gamma units), sorted by Re:\n");
  for (const auto& l : numeric.lambdas)
    std::printf("  % .12e %+.12e i\n", l.real(), l.imag());
  std::printf("phase: %s\n", to_string(numeric.phase));
  std::printf("suppression gap: %.6e\n", numeric.suppression_gap);
  std::printf("E_p = %.12e Gamma^2\n", ep_condition(apt));
  const auto marks = suppression_detunings(o.gamma - 1.0, 1.0);
  if (marks.empty()) {
    std::printf("linewidth-suppression detunings: none\n");
  } else {
    std::printf("linewidth-suppression detunings:");
    for (double m : marks) std::printf(" %+.12e", m);
    std::printf("\n");
  }
  return 0;
}

BranchSet point_branches(const PointOpts& o, double I) {
  const AptConfig apt{o.Delta, o.gamma, 1.0, o.g};
  const KerrMode which = o.which == "magnon" ? KerrMode::Magnon : KerrMode::Cavity;
  if (o.g != 0.0) {
    SystemParams p = scenario_params(apt, o.detuning, which, o.U, std::sqrt(I));
    const NonlinearResult nr = nonlinear_steady_state(p);
    if (!nr.converged) throw std::runtime_error("nonlinear solver did not converge");
    BranchSet bs;
    Branch b;
    b.state = nr.state;
    b.response = which == KerrMode::Cavity ? nr.state.x : nr.state.y;
    bs.roots.push_back(b);
    return classify_branch_stability(std::move(bs), p);
  }
  BranchSet bs = which == KerrMode::Cavity ? cavity_branches(apt, o.detuning, o.U, I)
                 : o.detuning == 0.0       ? magnon_branches(apt, o.U, I)
                                           : magnon_branches_detuned(apt, o.detuning, o.U, I);
  return classify_branch_stability(std::move(bs), apt, o.detuning, which, o.U);
}

int cmd_steady(const PointOpts& o) {
  const double I = point_intensity(o);
  const BranchSet bs = point_branches(o, I);
  std::printf("drive intensity I = %.12e Gamma^2, %zu root(s), %s\n", I, bs.roots.size(),
              to_string(bs.regime));
  for (size_t k = 0; k < bs.roots.size(); ++k) {
    const auto& b = bs.roots[k];
    std::printf("root %zu: response %.12e  [%s%s]\n", k, b.response,
                b.stable ? "stable" : "unstable", b.marginal ? ", marginal" : "");
    std::printf("   beta1 = % .6e%+.6e i   alpha = % .6e%+.6e i   beta2 = % .6e%+.6e i\n",
                b.state.beta1.real(), b.state.beta1.imag(), b.state.alpha.real(),
                b.state.alpha.imag(), b.state.beta2.real(), b.state.beta2.imag());
    std::printf("   x = %.12e   y = %.12e\n", b.state.x, b.state.y);
  }
  return 0;
}

int cmd_stability(const PointOpts& o) {
  const double I = point_intensity(o);
  const BranchSet bs = point_branches(o, I);
  const AptConfig apt{o.Delta, o.gamma, 1.0, o.g};
  const KerrMode which = o.which == "magnon" ? KerrMode::Magnon : KerrMode::Cavity;
  SystemParams p = scenario_params(apt, o.detuning, which, o.U, std::sqrt(I));
  for (size_t k = 0; k < bs.roots.size(); ++k) {
    const auto& b = bs.roots[k];
    const Mat6 J = quadrature_jacobian(p, {b.state.beta1, b.state.alpha, b.state.beta2});
    const StabilityVerdict v = stability_from_jacobian(J, 1.0);
    std::printf("root %zu (response %.6e): max Re lambda = % .6e Gamma, Routh-Hurwitz %s, "
                "companion %s, agreement %s%s\n",
                k, b.response, v.max_real_part, v.routh_stable ? "stable" : "unstable",
                v.stable ? "stable" : "unstable", v.method_agreement ? "yes" : "no",
                v.marginal ? " [MARGINAL]" : "");
  }
  return 0;
}

int cmd_dynamics(const PointOpts& o, const CommonOpts& c, double t_max, double tol,
                 int record, int from_branch) {
  const double I = point_intensity(o);
  const AptConfig apt{o.Delta, o.gamma, 1.0, o.g};
  const KerrMode which = o.which == "magnon" ? KerrMode::Magnon : KerrMode::Cavity;
  SystemParams p = scenario_params(apt, o.detuning, which, o.U, std::sqrt(I));

  Amplitudes v0{};
  if (from_branch >= 0) {
    const BranchSet bs = point_branches(o, I);
    if (static_cast<size_t>(from_branch) >= bs.roots.size())
      throw std::runtime_error("branch index out of range");
    const auto& st = bs.roots[static_cast<size_t>(from_branch)].state;
    v0 = perturbed({st.beta1, st.alpha, st.beta2}, 1e-3, c.seed);
  }

  IntegrationOptions opt;
  opt.t_max = t_max;
  opt.tol = tol;
  opt.record_every = record;
  const IntegrationResult res = integrate_to_steady(p, v0, opt);
  std::printf("status: %s after %llu steps (t = %.3e / Gamma, residual %.3e)\n",
              to_string(res.status), static_cast<unsigned long long>(res.steps),
              res.t_end, res.residual);
  std::printf("final: x = %.12e, y = %.12e\n", res.state.x, res.state.y);

  if (record > 0 && !c.out.empty()) {
    SweepResult traj;
    traj.header = {{"t", "1/Gamma"},   {"Re_beta1", "1"}, {"Im_beta1", "1"},
                   {"Re_alpha", "1"},  {"Im_alpha", "1"}, {"Re_beta2", "1"},
                   {"Im_beta2", "1"}};
    for (const auto& s : res.trajectory) {
      Row row;
      row.values = {s.t,
                    s.v[0].real(), s.v[0].imag(),
                    s.v[1].real(), s.v[1].imag(),
                    s.v[2].real(), s.v[2].imag()};
      traj.rows.push_back(std::move(row));
    }
    traj.metadata["tool"] = "aptsense";
    traj.metadata["kind"] = "trajectory";
    traj.metadata["seed"] = std::to_string(c.seed);
    write_table(traj, c.out, c.format == "json" ? OutputFormat::Json : OutputFormat::Csv);
    std::fprintf(stderr, "wrote %zu trajectory samples to %s\n", traj.rows.size(),
                 c.out.c_str());
  }
  return res.status == IntegrationStatus::CONVERGED ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-mode cavity-magnon sweep and steady-state tool"};
  app.require_subcommand(1);

  CommonOpts common;
  PointOpts point;
  double t_max = 200.0, tol = 1e-9;
  int record = 0, from_branch = -1;
  std::string fig2_gamma = "sqrt2";
  double fig4_g = 0.03;
  int points = 0;  // 0: per-figure default
  std::string which = "cavity";

  auto* sweep = app.add_subcommand("sweep", "run a configured 1-D/2-D parameter sweep");
  add_common(sweep, common);

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and phase at one point");
  add_point(spectrum, point, false);

  auto* steady = app.add_subcommand("steady", "steady-state branches at one point");
  add_point(steady, point);

  auto* stability = app.add_subcommand("stability", "Routh-Hurwitz verdicts at one point");
  add_point(stability, point);

  auto* dynamics = app.add_subcommand("dynamics", "time integration of the mean-field flow");
  add_point(dynamics, point);
  add_common(dynamics, common, false);
  dynamics->add_option("--t-max", t_max, "integration horizon [1/Gamma]");
  dynamics->add_option("--tol", tol, "steady-state tolerance");
  dynamics->add_option("--record", record, "record every Nth step");
  dynamics->add_option("--from-branch", from_branch,
                       "start from a perturbed steady branch (index)");

  const auto add_fig = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, common);
    cmd->add_option("--points", points, "grid points per axis");
    return cmd;
  };
  auto* fig2 = add_fig("fig2", "eigenvalue sweep vs Delta");
  fig2->add_option("--gamma", fig2_gamma, "1|sqrt2|<value in Gamma>");
  auto* fig3a = add_fig("fig3a", "log10 x over the (Delta, gamma) plane");
  auto* fig3b = add_fig("fig3b", "cavity response vs Delta, two Kerr strengths");
  auto* fig3c = add_fig("fig3c", "cavity response ratio vs drive detuning");
  auto* fig4 = add_fig("fig4", "cavity response vs Delta with coherent coupling");
  fig4->add_option("--g", fig4_g, "coherent coupling [Gamma]");
  auto* fig5a = add_fig("fig5a", "spin-current response vs Delta");
  auto* fig5b = add_fig("fig5b", "spin-current response ratio vs drive detuning");

  try {
    app.parse(argc, argv);

    if (sweep->parsed()) {
      if (common.config.empty()) throw ConfigError(0, "sweep requires --config");
      std::ifstream is(common.config);
      if (!is) throw ConfigError(0, "cannot open config: " + common.config);
      std::stringstream buf;
      buf << is.rdbuf();
      SweepSpec spec = parse_config(buf.str());
      if (!common.out.empty()) spec.out_path = common.out;
      if (app.count_all() != 0) {
        if (sweep->count("--seed")) spec.seed = common.seed;
        if (sweep->count("--threads")) spec.threads = common.threads;
        if (sweep->count("--format"))
          spec.format = common.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
      }
      SweepResult r = run_sweep(spec);
      CommonOpts o = common;
      o.out = spec.out_path;
      o.format = spec.format == OutputFormat::Json ? "json" : "csv";
      return emit(r, o);
    }
    if (spectrum->parsed()) return cmd_spectrum(point);
    if (steady->parsed()) return cmd_steady(point);
    if (stability->parsed()) return cmd_stability(point);
    if (dynamics->parsed()) return cmd_dynamics(point, common, t_max, tol, record, from_branch);

    if (fig2->parsed()) {
      double gamma = std::sqrt(2.0);
      if (fig2_gamma == "1") gamma = 1.0;
      else if (fig2_gamma != "sqrt2") gamma = std::stod(fig2_gamma);
      return emit(run_fig2(gamma, points > 0 ? points : 601, common.threads), common);
    }
    if (fig3a->parsed())
      return emit(run_fig3a(points > 0 ? points : 121, points > 0 ? points : 81,
                            common.threads),
                  common);
    if (fig3b->parsed())
      return emit(run_fig3b(KerrMode::Cavity, points > 0 ? points : 601, common.threads),
                  common);
    if (fig3c->parsed())
      return emit(run_fig3c(KerrMode::Cavity, points > 0 ? points : 201, common.threads),
                  common);
    if (fig4->parsed())
      return emit(run_fig4(fig4_g, points > 0 ? points : 241, common.threads), common);
    if (fig5a->parsed())
      return emit(run_fig3b(KerrMode::Magnon, points > 0 ? points : 601, common.threads),
                  common);
    if (fig5b->parsed())
      return emit(run_fig3c(KerrMode::Magnon, points > 0 ? points : 201, common.threads),
                  common);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

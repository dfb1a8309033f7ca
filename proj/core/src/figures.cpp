#include "aptsense/figures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "aptsense/constants.hpp"
#include "aptsense/sensing.hpp"
#include "aptsense/spectrum.hpp"
#include "aptsense/stability.hpp"

namespace aptsense {

namespace {

std::string fmt17(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void base_metadata(SweepResult& r, const FigureDefaults& fd) {
  r.metadata["tool"] = "aptsense";
  r.metadata["version"] = APTSENSE_VERSION_STRING;
  r.metadata["param.Gamma"] = fmt17(fd.Gamma);
  r.metadata["param.kappa_minus"] = fmt17(fd.kappa_minus);
  r.metadata["param.wavelength"] = fmt17(fd.wavelength);
}

/// Picks the branch nearest to the previous response; falls back to the
/// smallest stable root (then the smallest root) when there is no history.
const Branch& pick_tracked(const BranchSet& bs, double prev) {
  if (prev >= 0.0) {
    size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < bs.roots.size(); ++k) {
      const double d = std::abs(bs.roots[k].response - prev);
      if (d < bd) {
        bd = d;
        best = k;
      }
    }
    return bs.roots[best];
  }
  for (const auto& b : bs.roots)
    if (b.stable) return b;
  return bs.roots.front();
}

double half_max_width(const std::vector<double>& xs, const std::vector<double>& ys) {
  // Full width at half maximum by linear interpolation around the peak.
  const auto it = std::max_element(ys.begin(), ys.end());
  const double half = *it / 2.0;
  const size_t peak = static_cast<size_t>(it - ys.begin());
  double left = xs.front(), right = xs.back();
  for (size_t k = peak; k-- > 0;) {
    if (ys[k] <= half) {
      const double t = (half - ys[k]) / (ys[k + 1] - ys[k]);
      left = xs[k] + t * (xs[k + 1] - xs[k]);
      break;
    }
  }
  for (size_t k = peak; k + 1 < ys.size(); ++k) {
    if (ys[k + 1] <= half) {
      const double t = (ys[k] - half) / (ys[k] - ys[k + 1]);
      right = xs[k] + t * (xs[k + 1] - xs[k]);
      break;
    }
  }
  return right - left;
}

}  // namespace

double FigureDefaults::intensity(double power) const {
  const double omega = drive_amplitude({power, wavelength, kappa_minus}) / Gamma;
  return omega * omega;
}

FigureDefaults figure_defaults() {
  FigureDefaults fd;
  fd.Gamma = constants::two_pi * 1e6;
  fd.kappa_minus = 0.05 * fd.Gamma;
  return fd;
}

double locate_coalescence(double gamma_over_Gamma, double lo, double hi) {
  const auto spread = [&](double Delta) {
    AptConfig apt{Delta, gamma_over_Gamma, 1.0, 0.0};
    const auto s = eigenvalues_numeric(build_matrix(apt.expand()));
    return std::max({std::abs(s.lambdas[0] - s.lambdas[1]),
                     std::abs(s.lambdas[0] - s.lambdas[2]),
                     std::abs(s.lambdas[1] - s.lambdas[2])});
  };
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (spread(m1) < spread(m2)) hi = m2;
    else lo = m1;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> locate_linewidth_zeros(double gamma_over_Gamma) {
  const auto im_top = [&](double Delta) {
    AptConfig apt{Delta, gamma_over_Gamma, 1.0, 0.0};
    const auto s = eigenvalues_numeric(build_matrix(apt.expand()));
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& l : s.lambdas) top = std::max(top, l.imag());
    return top;
  };
  std::vector<double> zeros;
  const int n = 3000;
  const double hi = 1.5;
  double prev_d = 0.0, prev_f = im_top(0.0);
  if (std::abs(prev_f) < 1e-12) zeros.push_back(0.0);
  for (int k = 1; k <= n; ++k) {
    const double d = hi * k / n;
    const double f = im_top(d);
    if (prev_f * f < 0.0) {
      double a = prev_d, b = d, fa = prev_f;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = im_top(m);
        if (fa * fm <= 0.0) b = m;
        else {
          a = m;
          fa = fm;
        }
      }
      zeros.push_back(0.5 * (a + b));
    }
    prev_d = d;
    prev_f = f;
  }
  return zeros;
}

SweepResult run_fig2(double gamma_over_Gamma, int points, int /*threads*/) {
  const FigureDefaults fd = figure_defaults();
  SweepResult r;
  r.header = {{"Delta", "Gamma"},      {"Re_lambda1", "Gamma"}, {"Re_lambda2", "Gamma"},
              {"Re_lambda3", "Gamma"}, {"Im_lambda1", "Gamma"}, {"Im_lambda2", "Gamma"},
              {"Im_lambda3", "Gamma"}, {"phase", "1"},          {"ep_mark", "1"},
              {"suppression_mark", "1"}};

  const double lo = -3.0, hi = 3.0;
  const double step = (hi - lo) / (points - 1);

  const double ep_pos = locate_coalescence(gamma_over_Gamma);
  std::vector<double> zero_marks = locate_linewidth_zeros(gamma_over_Gamma);
  {
    std::vector<double> both;
    for (double z : zero_marks) {
      both.push_back(z);
      if (z > 0.0) both.push_back(-z);
    }
    std::sort(both.begin(), both.end());
    zero_marks = both;
  }

  std::array<cxd, 3> prev{};
  bool have_prev = false;
  for (int k = 0; k < points; ++k) {
    const double Delta = lo + step * k;
    AptConfig apt{Delta, gamma_over_Gamma, 1.0, 0.0};
    ComplexSpectrum s = eigenvalues_closed_form(apt);
    if (have_prev) s.lambdas = match_branches(prev, s.lambdas);
    prev = s.lambdas;
    have_prev = true;

    Row row;
    row.values = {Delta,
                  s.lambdas[0].real(),
                  s.lambdas[1].real(),
                  s.lambdas[2].real(),
                  s.lambdas[0].imag(),
                  s.lambdas[1].imag(),
                  s.lambdas[2].imag(),
                  static_cast<double>(static_cast<int>(s.phase)),
                  0.0,
                  0.0};
    if (std::abs(std::abs(Delta) - ep_pos) <= 0.5 * step) row.values[8] = 1.0;
    for (double z : zero_marks)
      if (std::abs(Delta - z) <= 0.5 * step) row.values[9] = 1.0;
    r.rows.push_back(std::move(row));
  }

  base_metadata(r, fd);
  r.metadata["param.gamma"] = fmt17(gamma_over_Gamma);
  r.metadata["ep_detuning_pos"] = fmt17(ep_pos);
  r.metadata["ep_detuning_neg"] = fmt17(-ep_pos);
  {
    std::ostringstream os;
    for (size_t k = 0; k < zero_marks.size(); ++k) os << (k ? " " : "") << fmt17(zero_marks[k]);
    r.metadata["suppression_detunings"] = os.str();
  }
  return r;
}

SweepResult run_fig3a(int points_delta, int points_gamma, int threads) {
  const FigureDefaults fd = figure_defaults();
  const double U_a = constants::two_pi * 1e-9 / fd.Gamma;
  const double I = fd.intensity(fd.power_weak);

  SweepSpec spec;
  spec.axis1 = {"Delta", -3.0 * fd.Gamma, 3.0 * fd.Gamma, points_delta};
  spec.axis2 = AxisSpec{"gamma", 1.0 * fd.Gamma, 2.0 * fd.Gamma, points_gamma};
  spec.parameters["Gamma"] = fd.Gamma;
  spec.parameters["gamma"] = std::sqrt(2.0) * fd.Gamma;
  spec.parameters["Delta"] = 0.0;
  spec.parameters["Delta_a"] = 0.0;
  spec.parameters["g"] = 0.0;
  spec.parameters["U_a"] = U_a * fd.Gamma;
  spec.parameters["U_b1"] = 0.0;
  spec.parameters["U_b2"] = 0.0;
  spec.parameters["kappa_minus"] = fd.kappa_minus;
  spec.parameters["power"] = fd.power_weak;
  spec.parameters["wavelength"] = fd.wavelength;
  spec.parameters["eta_u_small"] = constants::two_pi * 1e-7;
  spec.parameters["eta_u_large"] = constants::two_pi * 1e-6;
  spec.observables = {"ep", "x", "stability", "regime"};
  spec.threads = threads;
  SweepResult r = run_sweep(spec);

  // log10(x) plus the per-row E_p = 0 boundary (the linewidth-suppression
  // set), appended as columns.
  r.header.push_back({"log10_x", "1"});
  r.header.push_back({"boundary_delta_pos", "Gamma"});
  r.header.push_back({"boundary_delta_neg", "Gamma"});
  const int cx = r.column("x");
  const int cg = r.column("gamma");
  for (auto& row : r.rows) {
    const double x = row.values[static_cast<size_t>(cx)];
    row.values.push_back(x > 0.0 ? std::log10(x) : std::nan(""));
    const double gamma = row.values[static_cast<size_t>(cg)];
    const auto marks = suppression_detunings(gamma - 1.0, 1.0);
    if (marks.size() == 2) {
      row.values.push_back(marks[0]);
      row.values.push_back(marks[1]);
    } else if (marks.size() == 1) {
      row.values.push_back(marks[0]);
      row.values.push_back(marks[0]);
    } else {
      row.values.push_back(std::nan(""));
      row.values.push_back(std::nan(""));
    }
  }
  r.metadata["intensity"] = fmt17(I);
  return r;
}

SweepResult run_fig3b(KerrMode which, int points, int /*threads*/) {
  const FigureDefaults fd = figure_defaults();
  const double U_small = constants::two_pi * 1e-10 / fd.Gamma;  // 0.1 nHz
  const double U_large = constants::two_pi * 1e-9 / fd.Gamma;   // 1 nHz
  const double I_weak = fd.intensity(fd.power_weak);
  const double I_strong = fd.intensity(fd.power_strong);
  const char* resp = which == KerrMode::Cavity ? "x" : "y";

  SweepResult r;
  r.header = {{"Delta", "Gamma"}};
  const struct {
    double U, I;
    const char* suffix;
  } curves[4] = {{U_small, I_weak, "_u0.1nHz_8uW"},
                 {U_large, I_weak, "_u1nHz_8uW"},
                 {U_small, I_strong, "_u0.1nHz_8mW"},
                 {U_large, I_strong, "_u1nHz_8mW"}};
  for (const auto& c : curves) r.header.push_back({std::string(resp) + c.suffix, "1"});
  for (const auto& c : curves) r.header.push_back({std::string("stable") + c.suffix, "1"});

  const double lo = -3.0, hi = 3.0;
  std::vector<double> deltas(static_cast<size_t>(points));
  for (int k = 0; k < points; ++k) deltas[static_cast<size_t>(k)] = lo + (hi - lo) * k / (points - 1);

  std::vector<std::vector<double>> responses(4), stables(4);
  for (int c = 0; c < 4; ++c) {
    double prev = -1.0;
    for (double Delta : deltas) {
      AptConfig apt{Delta, std::sqrt(2.0), 1.0, 0.0};
      BranchSet bs = which == KerrMode::Cavity
                         ? cavity_branches(apt, 0.0, curves[c].U, curves[c].I)
                         : magnon_branches(apt, curves[c].U, curves[c].I);
      bs = classify_branch_stability(std::move(bs), apt, 0.0, which, curves[c].U);
      const Branch& b = pick_tracked(bs, prev);
      prev = b.response;
      responses[static_cast<size_t>(c)].push_back(b.response);
      stables[static_cast<size_t>(c)].push_back(b.stable ? 1.0 : 0.0);
    }
  }

  for (size_t k = 0; k < deltas.size(); ++k) {
    Row row;
    row.values.push_back(deltas[k]);
    for (int c = 0; c < 4; ++c) row.values.push_back(responses[static_cast<size_t>(c)][k]);
    for (int c = 0; c < 4; ++c) row.values.push_back(stables[static_cast<size_t>(c)][k]);
    r.rows.push_back(std::move(row));
  }

  base_metadata(r, fd);
  r.metadata["param.U_small"] = fmt17(U_small * fd.Gamma);
  r.metadata["param.U_large"] = fmt17(U_large * fd.Gamma);
  r.metadata["response"] = resp;
  const size_t mid = deltas.size() / 2;  // Delta = 0 for odd point counts
  const double ratio_weak = responses[0][mid] / responses[1][mid];
  const double ratio_strong = responses[2][mid] / responses[3][mid];
  r.metadata["peak_ratio_8uW"] = fmt17(ratio_weak);
  r.metadata["peak_ratio_8mW"] = fmt17(ratio_strong);
  for (int c = 0; c < 4; ++c)
    r.metadata[std::string("fwhm") + curves[c].suffix] =
        fmt17(half_max_width(deltas, responses[static_cast<size_t>(c)]));
  return r;
}

SweepResult run_fig3c(KerrMode which, int points, int /*threads*/) {
  const FigureDefaults fd = figure_defaults();
  const double U_small = constants::two_pi * 1e-7 / fd.Gamma;  // 0.1 uHz
  const double U_large = constants::two_pi * 1e-6 / fd.Gamma;  // 1 uHz
  const double I = fd.intensity(fd.power_strong);
  const AptConfig apt{0.0, std::sqrt(2.0), 1.0, 0.0};

  SweepResult r;
  r.header = {{"Delta_a", "Gamma"},     {"resp_small", "1"},  {"resp_large", "1"},
              {"eta", "1"},             {"roots_small", "1"}, {"roots_large", "1"},
              {"monostable", "1"},      {"stable_small", "1"}, {"stable_large", "1"}};

  const double lo = -0.05, hi = 0.15;
  std::vector<double> detunings(static_cast<size_t>(points));
  for (int k = 0; k < points; ++k)
    detunings[static_cast<size_t>(k)] = lo + (hi - lo) * k / (points - 1);

  const auto branches_at = [&](double d, double U) {
    BranchSet bs = which == KerrMode::Cavity ? cavity_branches(apt, d, U, I)
                   : d == 0.0                ? magnon_branches(apt, U, I)
                                             : magnon_branches_detuned(apt, d, U, I);
    return classify_branch_stability(std::move(bs), apt, d, which, U);
  };

  r.rows.assign(detunings.size(), Row{});
  const auto eval_point = [&](size_t idx, double& prev_small, double& prev_large) {
    const double d = detunings[idx];
    const BranchSet bss = branches_at(d, U_small);
    const BranchSet bsl = branches_at(d, U_large);
    const Branch& bs = pick_tracked(bss, prev_small);
    const Branch& bl = pick_tracked(bsl, prev_large);
    prev_small = bs.response;
    prev_large = bl.response;

    Row row;
    const bool mono = bss.roots.size() == 1 && bsl.roots.size() == 1;
    row.values = {d,
                  bs.response,
                  bl.response,
                  bs.response / bl.response,
                  static_cast<double>(bss.roots.size()),
                  static_cast<double>(bsl.roots.size()),
                  mono ? 1.0 : 0.0,
                  bs.stable ? 1.0 : 0.0,
                  bl.stable ? 1.0 : 0.0};
    if (!mono) row.tag = "BISTABLE";
    r.rows[idx] = std::move(row);
  };

  // Two hysteresis passes starting at the resonance end of the grid:
  // upward through d >= 0, then downward through d < 0.
  {
    double ps = -1.0, pl = -1.0;
    for (size_t k = 0; k < detunings.size(); ++k)
      if (detunings[k] >= 0.0) eval_point(k, ps, pl);
    ps = pl = -1.0;
    for (size_t k = detunings.size(); k-- > 0;)
      if (detunings[k] < 0.0) eval_point(k, ps, pl);
  }

  base_metadata(r, fd);
  r.metadata["param.U_small"] = fmt17(U_small * fd.Gamma);
  r.metadata["param.U_large"] = fmt17(U_large * fd.Gamma);
  r.metadata["response"] = which == KerrMode::Cavity ? "x" : "y";

  double eta0 = std::nan("");
  double eta_max = 0.0, eta_arg = std::nan("");
  for (size_t k = 0; k < detunings.size(); ++k) {
    const auto& v = r.rows[k].values;
    if (detunings[k] == 0.0) eta0 = v[3];
    if (detunings[k] > 0.0 && detunings[k] <= 0.08 + 1e-12 && v[6] == 1.0 && v[3] > eta_max) {
      eta_max = v[3];
      eta_arg = detunings[k];
    }
  }
  r.metadata["eta_at_zero"] = fmt17(eta0);
  r.metadata["eta_max_monostable_window"] = fmt17(eta_max);
  r.metadata["eta_window_argmax"] = fmt17(eta_arg);
  return r;
}

SweepResult run_fig4(double g_over_Gamma, int points, int /*threads*/) {
  const FigureDefaults fd = figure_defaults();
  const double U_small = constants::two_pi * 1e-7 / fd.Gamma;
  const double U_large = constants::two_pi * 1e-6 / fd.Gamma;
  const double I_weak = fd.intensity(fd.power_weak);
  const double I_strong = fd.intensity(fd.power_strong);

  SweepResult r;
  r.header = {{"Delta", "Gamma"}};
  const struct {
    double U, I;
    const char* suffix;
  } curves[4] = {{U_small, I_weak, "_u0.1uHz_8uW"},
                 {U_large, I_weak, "_u1uHz_8uW"},
                 {U_small, I_strong, "_u0.1uHz_8mW"},
                 {U_large, I_strong, "_u1uHz_8mW"}};
  for (const auto& c : curves) r.header.push_back({std::string("x") + c.suffix, "1"});

  const double lo = -1.0, hi = 1.0;
  std::vector<double> deltas(static_cast<size_t>(points));
  for (int k = 0; k < points; ++k)
    deltas[static_cast<size_t>(k)] = lo + (hi - lo) * k / (points - 1);

  // The single-Kerr steady state stays an exact cubic for finite g; the
  // analytic solve enumerates every branch, so hysteresis tracking survives
  // the folds of the S-curve.
  std::vector<std::vector<double>> responses(4);
  bool all_converged = true;
  for (int c = 0; c < 4; ++c) {
    double prev = -1.0;
    for (double Delta : deltas) {
      AptConfig apt{Delta, std::sqrt(2.0), 1.0, g_over_Gamma};
      BranchSet bs = cavity_branches(apt, 0.0, curves[c].U, curves[c].I);
      bs = classify_branch_stability(
          std::move(bs),
          scenario_params(apt, 0.0, KerrMode::Cavity, curves[c].U, std::sqrt(curves[c].I)));
      const Branch& b = pick_tracked(bs, prev);
      prev = b.response;
      responses[static_cast<size_t>(c)].push_back(b.response);
    }
  }

  for (size_t k = 0; k < deltas.size(); ++k) {
    Row row;
    row.values.push_back(deltas[k]);
    for (int c = 0; c < 4; ++c) row.values.push_back(responses[static_cast<size_t>(c)][k]);
    for (int c = 0; c < 4; ++c)
      if (std::isnan(responses[static_cast<size_t>(c)][k])) row.tag = "NONCONVERGED";
    r.rows.push_back(std::move(row));
  }

  base_metadata(r, fd);
  r.metadata["param.g"] = fmt17(g_over_Gamma);
  r.metadata["param.U_small"] = fmt17(U_small * fd.Gamma);
  r.metadata["param.U_large"] = fmt17(U_large * fd.Gamma);
  const size_t mid = deltas.size() / 2;
  r.metadata["eta_at_zero_8uW"] = fmt17(responses[0][mid] / responses[1][mid]);
  r.metadata["eta_at_zero_8mW"] = fmt17(responses[2][mid] / responses[3][mid]);
  r.metadata["converged"] = all_converged ? "true" : "false";
  return r;
}

}  // namespace aptsense

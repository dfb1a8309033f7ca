#pragma once

#include "aptsense/steady_state.hpp"
#include "aptsense/sweep.hpp"

namespace aptsense {

/// Shared defaults of the figure runners (SI units). Omega is derived from
/// (power, wavelength, kappa_minus) via drive_amplitude().
struct FigureDefaults {
  double Gamma = 0.0;         // set in figure_defaults()
  double kappa_minus = 0.0;   // 0.05 Gamma
  double wavelength = 1550e-9;
  double power_weak = 8e-6;   // W
  double power_strong = 8e-3; // W

  double intensity(double power) const;  // (Omega/Gamma)^2, Gamma-units
};

FigureDefaults figure_defaults();

/// Eigenvalue sweep over Delta in [-3, 3] Gamma at fixed gamma: real and
/// imaginary parts of the three branch-matched eigenvalues, with located
/// coalescence abscissas and zero-linewidth crossings in the metadata.
SweepResult run_fig2(double gamma_over_Gamma, int points = 601, int threads = 1);

/// 2-D (Delta, gamma) map of log10 x on the tracked stable branch with the
/// stability verdict and the E_p = 0 boundary of the unstable region.
SweepResult run_fig3a(int points_delta = 121, int points_gamma = 81, int threads = 1);

/// Response-vs-Delta line cuts at gamma = sqrt(2) Gamma for two Kerr
/// strengths (0.1 and 1 nHz) and two drive powers; emits the peak ratio and
/// the full width at half maximum of each curve.
SweepResult run_fig3b(KerrMode which, int points = 601, int threads = 1);

/// Response ratio eta vs drive detuning at 8 mW for the (0.1, 1) uHz Kerr
/// pair, with per-point mono/bistable regime tags.
SweepResult run_fig3c(KerrMode which, int points = 201, int threads = 1);

/// Response-vs-Delta curves in the presence of a coherent coupling g
/// (general nonlinear solver); emits eta at Delta = 0 for both powers.
SweepResult run_fig4(double g_over_Gamma = 0.03, int points = 241, int threads = 1);

/// Locates the eigenvalue-coalescence detuning nearest the positive EP by
/// minimizing the numeric eigenvalue spread (ternary search on [lo, hi]).
double locate_coalescence(double gamma_over_Gamma, double lo = 1.2, double hi = 1.6);

/// Zero crossings of Im lambda_1 (the least-damped eigenvalue) over
/// Delta > 0, located by bisection; empty when the linewidth never closes.
std::vector<double> locate_linewidth_zeros(double gamma_over_Gamma);

}  // namespace aptsense

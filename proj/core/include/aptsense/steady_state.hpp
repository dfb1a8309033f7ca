#pragma once

#include <array>
#include <optional>
#include <vector>

#include "aptsense/params.hpp"

namespace aptsense {

/// Degenerate response equation (all coefficients zero) with a finite drive.
class SingularDriveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Steady complex amplitudes and the derived responses x = |alpha|^2
/// (cavity) and y = |beta1|^2 (spin current).
struct SteadyState {
  cxd beta1{};
  cxd alpha{};
  cxd beta2{};
  double x = 0.0;
  double y = 0.0;
};

SteadyState make_steady(cxd beta1, cxd alpha, cxd beta2);

/// Exact linear (U = 0) steady state of the balanced configuration:
///   beta1 = -Γ(-iΔ+γ)Ω / (E_p γ),  alpha = (Δ²+γ²)Ω / (E_p γ),
///   beta2 = -Γ(iΔ+γ)Ω / (E_p γ).
/// Requires g == 0. Throws NearSingularError when |E_p| < 1e-9 Γ².
SteadyState linear_steady_state(const AptConfig& apt, double Omega);

/// Which mode carries the Kerr nonlinearity in a sensing scenario.
enum class KerrMode { Cavity, Magnon };

/// Full parameter set for a sensing scenario on top of the balanced
/// configuration. `drive_detuning` is the laser detuning knob of the
/// response-vs-detuning scans: positive values put the drive on the side the
/// Kerr shift pulls the cavity toward (stored as Delta_a = -drive_detuning).
SystemParams scenario_params(const AptConfig& apt, double drive_detuning,
                             KerrMode which, double U, double Omega);

/// Coefficients of the drive-response relation I = c3 r^3 + c2 r^2 + c1 r.
struct CubicCoeffs {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
};

/// Cavity-Kerr response cubic in x = |alpha|^2:
///   c3 = 4 U_a²,  c2 = -4 U_a Δ_d,  c1 = γ²E_p²/(Δ²+γ²)² + Δ_d²,
/// where Δ_d is the drive detuning (c2 = 0 and c1 reduces to the first term
/// at resonant drive). Requires g == 0.
CubicCoeffs cavity_cubic_coeffs(const AptConfig& apt, double drive_detuning, double U_a);

/// Cavity-Kerr response cubic in the presence of a coherent coupling g:
///   I = 4U² x³ + 4U Im(D0) x² + |D0|² x,
///   D0 = γ - iΔ_d + 2γ(g - iΓ)²/(Δ² + γ²).
/// Reduces to cavity_cubic_coeffs at g = 0.
CubicCoeffs cavity_coupled_cubic_coeffs(const AptConfig& apt, double drive_detuning,
                                        double U_a);

/// Magnon-Kerr response cubic in y = |beta1|^2 at resonant cavity drive:
///   I = { 4U²[(γ²-Γ²)² + γ²Δ²] y³ + 4UΔγ²E_p y² + γ²E_p² y } / (Γ²(Δ²+γ²)).
/// Requires g == 0. The quadratic coefficient sign follows the equations of
/// motion (it is odd in Δ and vanishes at Δ = 0 or E_p = 0).
CubicCoeffs magnon_cubic_coeffs(const AptConfig& apt, double U_b1);

enum class Regime { MONOSTABLE, BISTABLE };

const char* to_string(Regime r);

/// One steady-state branch: the response value, the reconstructed amplitudes,
/// and stability flags. `stable`/`marginal` are assigned by the stability
/// module; `slope_positive` records the dI/dr > 0 heuristic for diagnostics.
struct Branch {
  double response = 0.0;
  SteadyState state{};
  bool stable = false;
  bool marginal = false;
  bool slope_positive = false;
};

/// All real non-negative roots of a response cubic at one drive intensity,
/// sorted ascending. BISTABLE iff three positive roots coexist.
struct BranchSet {
  std::vector<Branch> roots;
  Regime regime = Regime::MONOSTABLE;
};

/// Roots of c3 r³ + c2 r² + c1 r = I (analytic cubic + Newton polish; roots
/// within 1e-12 relative are merged). Amplitudes are not filled in.
/// Throws SingularDriveError when all coefficients vanish with I > 0.
BranchSet solve_response_cubic(const CubicCoeffs& c, double I);

/// Turning-point analysis of a response cubic: solves dI/dr = 0 and reports
/// BISTABLE with the turning responses when a positive real solution exists.
struct BistabilityCheck {
  Regime regime = Regime::MONOSTABLE;
  std::vector<double> turning_points;
};

BistabilityCheck detect_bistability(const CubicCoeffs& c);

/// Cavity-Kerr branches with amplitudes reconstructed from the coupling
/// matrix relations. Requires g == 0.
BranchSet cavity_branches(const AptConfig& apt, double drive_detuning, double U_a, double I);

/// Magnon-Kerr branches at resonant cavity drive (cubic route).
BranchSet magnon_branches(const AptConfig& apt, double U_b1, double I);

/// Magnon-Kerr branches with a detuned drive. The drive-response relation is
/// no longer cubic; roots are isolated by a logarithmic scan plus bisection.
BranchSet magnon_branches_detuned(const AptConfig& apt, double drive_detuning,
                                  double U_b1, double I);

/// Cavity response accompanying a magnon-Kerr steady state with spin-current
/// response y:  x = I / |Γ²/(-i(Δ+2U_b1 y)-γ) + γ + Γ²/(iΔ-γ)|².
/// Throws NearSingularError when the denominator magnitude is < 1e-12 Γ.
double cavity_response_with_magnon_kerr(const AptConfig& apt, double U_b1, double y, double I);

/// General steady-state solver for arbitrary parameters (finite g, detuned
/// drive, any Kerr assignment): damped fixed-point iteration on the Kerr
/// shifts with a Newton fallback, tolerance 1e-10 on the responses.
struct NonlinearSolveOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  double damping = 0.5;
  // Seed responses (|beta1|^2, |alpha|^2, |beta2|^2); selects the branch.
  std::optional<std::array<double, 3>> seed;
};

struct NonlinearResult {
  SteadyState state{};
  bool converged = false;
  int iterations = 0;
};

NonlinearResult nonlinear_steady_state(const SystemParams& p,
                                       const NonlinearSolveOptions& opt = {});

/// Solves (H + 2 diag(shifts)) v = -i Omega e2 — the steady linear system at
/// frozen Kerr shifts. Exposed for the oracle tests.
std::array<cxd, 3> steady_linear_system(const SystemParams& p,
                                        const std::array<double, 3>& shifts);

}  // namespace aptsense

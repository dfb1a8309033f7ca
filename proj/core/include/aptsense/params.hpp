#pragma once

#include <complex>
#include <stdexcept>

namespace aptsense {

using cxd = std::complex<double>;

/// Raised when a requested operating point sits on (or numerically too close
/// to) a response singularity, e.g. the linear solution at E_p -> 0.
class NearSingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full parameter set of the driven three-mode cavity–magnon system.
///
/// All entries are angular rates (rad/s). A quantity quoted as "X Hz" is
/// stored as 2π·X. Internally the library works in Γ-units (see normalize());
/// SI conversion happens only at the CLI boundary.
struct SystemParams {
  double Gamma = 1.0;        // waveguide-mediated dissipative coupling; unit scale
  double gamma_b1 = 0.0;     // intrinsic decay of magnon mode b1
  double gamma_b2 = 0.0;     // intrinsic decay of magnon mode b2
  double kappa_minus = 0.0;  // cavity loss
  double kappa_plus = 0.0;   // cavity incoherent gain
  double Delta1 = 0.0;       // magnon detuning, mode b1
  double Delta2 = 0.0;       // magnon detuning, mode b2
  double Delta_a = 0.0;      // cavity detuning entering the coupling matrix
  double g1 = 0.0;           // coherent cavity–magnon coupling, b1 link
  double g2 = 0.0;           // coherent cavity–magnon coupling, b2 link
  double U_a = 0.0;          // cavity Kerr coefficient (rad/s per excitation)
  double U_b1 = 0.0;         // magnon Kerr coefficient, b1
  double U_b2 = 0.0;         // magnon Kerr coefficient, b2
  double Omega = 0.0;        // drive amplitude
};

/// Net cavity damping kappa_minus - kappa_plus; negative means net gain.
double derived_gamma_a(const SystemParams& p);

/// Checks the sign invariants (Gamma > 0, non-negative loss/gain/decay rates).
/// Throws std::invalid_argument on violation.
void validate(const SystemParams& p);

/// Rescales every rate by 1/Gamma so the result has Gamma == 1.
/// Throws std::invalid_argument if Gamma <= 0.
SystemParams normalize(const SystemParams& p);

/// Inverse of normalize(): rescales a Gamma=1 parameter set to the given Gamma.
SystemParams denormalize(const SystemParams& p, double Gamma);

/// Reduced parameter set of the balanced (anti-PT symmetric) configuration:
///   Delta_a = 0,  Delta1 = -Delta2 = Delta,
///   gamma   = gamma_b + Gamma = gamma_a + 2 Gamma,  g1 = g2 = g.
struct AptConfig {
  double Delta = 0.0;  // symmetric magnon detuning
  double gamma = 1.0;  // common effective linewidth
  double Gamma = 1.0;  // dissipative coupling
  double g = 0.0;      // common coherent coupling

  /// Optical gain -gamma_a = 2 Gamma - gamma implied by the constraint set.
  double implied_gain() const { return 2.0 * Gamma - gamma; }

  /// Expands to a full SystemParams satisfying the constraint identities
  /// exactly. kappa_minus is free (only gamma_a enters the dynamics); it
  /// defaults to 0.05 Gamma and is raised to gamma_a when needed to keep
  /// kappa_plus >= 0. Requires gamma >= Gamma so that gamma_b >= 0.
  SystemParams expand(double kappa_minus = -1.0) const;
};

/// E_p = Delta^2 + gamma^2 - 2 Gamma^2. Zero on the linewidth-suppression
/// locus; the linear steady state diverges there.
double ep_condition(const AptConfig& apt);

/// Laser drive converted to an amplitude: Omega = sqrt(P kappa_- / (ħ omega_d))
/// with omega_d = 2π c / lambda.
struct DriveSpec {
  double power = 0.0;        // input laser power [W]
  double wavelength = 0.0;   // drive wavelength [m]
  double kappa_minus = 0.0;  // cavity loss [rad/s]
};

/// Throws std::invalid_argument on negative power or non-positive wavelength.
double drive_amplitude(const DriveSpec& d);

}  // namespace aptsense

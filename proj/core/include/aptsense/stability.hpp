#pragma once

#include <array>

#include "aptsense/params.hpp"
#include "aptsense/steady_state.hpp"

namespace aptsense {

using Mat6 = std::array<double, 36>;    // row-major 6x6
using Poly6 = std::array<double, 7>;    // monic degree-6, descending powers

/// Real 6x6 fluctuation matrix over the quadrature basis
/// (δq_b1, δp_b1, δq_a, δp_a, δq_b2, δp_b2), plus the cavity-Kerr
/// auxiliaries Λ = U_a(α²-α*²) (purely imaginary), Ξ = U_a(α²+α*²),
/// Σ = 4U_a|α|².
struct FluctuationMatrix {
  Mat6 m{};
  cxd Lambda{};
  double Xi = 0.0;
  double Sigma = 0.0;
  double Gamma = 1.0;  // rate scale for the marginal band

  double& at(int r, int c) { return m[static_cast<size_t>(6 * r + c)]; }
  const double& at(int r, int c) const { return m[static_cast<size_t>(6 * r + c)]; }
};

/// Fluctuation matrix of the balanced configuration with a cavity Kerr term,
/// evaluated at the steady cavity amplitude alpha. Requires g == 0 and a
/// resonant drive (those are the conditions the block structure assumes).
FluctuationMatrix build_fluctuation_matrix(const AptConfig& apt, double U_a, cxd alpha);

/// Quadrature-basis Jacobian of the mean-field flow at the given amplitudes;
/// handles every Kerr assignment, finite g and a detuned drive. Reduces to
/// build_fluctuation_matrix on that function's domain.
Mat6 quadrature_jacobian(const SystemParams& p, const std::array<cxd, 3>& v);

/// Characteristic polynomial det(λI - M) by the Leverrier–Faddeev recursion.
Poly6 characteristic_polynomial(const Mat6& m);

/// Routh array test: true iff every first-column entry is positive
/// (all roots strictly in the left half-plane). Zero pivots are handled by
/// the standard epsilon-substitution rule.
bool routh_array_stable(const Poly6& poly);

/// The six roots of a monic degree-6 real polynomial via the eigenvalues of
/// its companion matrix.
std::array<cxd, 6> companion_roots(const Poly6& poly);

/// Verdict of the linear-stability analysis. `stable` is tied to the strict
/// sign of max Re λ; `marginal` flags |max Re λ| < 1e-9 Γ where stability
/// cannot be asserted in floating point; `method_agreement` records whether
/// the Routh array and the companion-root test concur.
struct StabilityVerdict {
  bool stable = false;
  bool marginal = false;
  double max_real_part = 0.0;
  bool method_agreement = true;
  bool routh_stable = false;
};

StabilityVerdict routh_hurwitz_stable(const FluctuationMatrix& m);
StabilityVerdict stability_from_jacobian(const Mat6& m, double Gamma);

/// Assigns each branch's stability flags from the Routh–Hurwitz analysis of
/// the fluctuation matrix at that branch's amplitudes. MARGINAL branches are
/// reported unstable-for-operation with the marginal diagnostic set.
BranchSet classify_branch_stability(BranchSet branches, const SystemParams& p);

/// Convenience overload for the balanced sensing scenarios.
BranchSet classify_branch_stability(BranchSet branches, const AptConfig& apt,
                                    double drive_detuning, KerrMode which, double U);

}  // namespace aptsense

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "aptsense/params.hpp"

namespace aptsense {

/// Symmetry phase of the three-mode spectrum.
enum class Phase { APT, APTB, EP };

const char* to_string(Phase p);

/// 3x3 non-Hermitian coupling matrix, row/column order (b1, a, b2):
///   diag( Delta1 - i(gamma_b1 + Gamma),
///         Delta_a - i(gamma_a + 2 Gamma),
///         Delta2 - i(gamma_b2 + Gamma) ),
/// off-diagonal g_j - i Gamma on the (b_j, a) links, zero corners.
struct CouplingMatrix {
  std::array<cxd, 9> m{};

  cxd& at(int r, int c) { return m[static_cast<size_t>(3 * r + c)]; }
  const cxd& at(int r, int c) const { return m[static_cast<size_t>(3 * r + c)]; }

  /// Largest entry magnitude; used as the tolerance scale.
  double max_norm() const;
  double frobenius_norm() const;
};

CouplingMatrix build_matrix(const SystemParams& p);

/// The three complex eigenvalues, sorted by descending real part (ties by
/// descending imaginary part), with the symmetry-phase label and the
/// suppression gap min_k max(|Re λ_k|, |Im λ_k|).
struct ComplexSpectrum {
  std::array<cxd, 3> lambdas{};
  Phase phase = Phase::APT;
  double suppression_gap = 0.0;
};

/// Closed-form eigenvalues of the balanced configuration:
///   λ_{1,3} = -i(γ ∓ sqrt(2Γ² + 4igΓ - 2g² - Δ²)),  λ_2 = -iγ,
/// principal branch of the square root.
ComplexSpectrum eigenvalues_closed_form(const AptConfig& apt);

/// Roots of det(M - λI) = 0 by the analytic complex-cubic method with Newton
/// polish; the general-parameter backend.
ComplexSpectrum eigenvalues_numeric(const CouplingMatrix& m);

/// Detunings where an eigenvalue has simultaneously vanishing real and
/// imaginary part: ±sqrt(Γ² - γ_b² - 2Γγ_b) for 0 <= γ_b < (√2-1)Γ,
/// the single value {0} at the boundary, empty otherwise.
std::vector<double> suppression_detunings(double gamma_b, double Gamma);

/// APT / EP / APTB from the sign of Δ² - 2Γ². Requires g == 0
/// (throws std::invalid_argument otherwise).
Phase classify_phase(const AptConfig& apt);

/// ‖(PT) M (PT)^{-1} + M‖_max with P exchanging modes 1 and 3 and T complex
/// conjugation; zero for an anti-PT symmetric matrix.
double apt_defect(const CouplingMatrix& m);

/// Reorders `current` to minimize the total distance to `previous`;
/// nearest-neighbor branch matching for sweep continuity across EPs.
std::array<cxd, 3> match_branches(const std::array<cxd, 3>& previous,
                                  const std::array<cxd, 3>& current);

}  // namespace aptsense

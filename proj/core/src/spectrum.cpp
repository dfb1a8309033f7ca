#include "aptsense/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "aptsense/cubic.hpp"

namespace aptsense {

namespace {

constexpr double kEpDistanceTol = 1e-8;   // eigenvalue coalescence, units of scale
constexpr double kPhaseTol = 1e-8;        // |Δ² - 2Γ²| tolerance, units of Γ²

void sort_spectrum(std::array<cxd, 3>& l) {
  std::sort(l.begin(), l.end(), [](const cxd& a, const cxd& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

double suppression_gap_of(const std::array<cxd, 3>& l) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& z : l) gap = std::min(gap, std::max(std::abs(z.real()), std::abs(z.imag())));
  return gap;
}

double min_pair_distance(const std::array<cxd, 3>& l) {
  return std::min({std::abs(l[0] - l[1]), std::abs(l[0] - l[2]), std::abs(l[1] - l[2])});
}

}  // namespace

const char* to_string(Phase p) {
  switch (p) {
    case Phase::APT: return "APT";
    case Phase::APTB: return "APTB";
    case Phase::EP: return "EP";
  }
  return "?";
}

double CouplingMatrix::max_norm() const {
  double v = 0.0;
  for (const auto& z : m) v = std::max(v, std::abs(z));
  return v;
}

double CouplingMatrix::frobenius_norm() const {
  double v = 0.0;
  for (const auto& z : m) v += std::norm(z);
  return std::sqrt(v);
}

CouplingMatrix build_matrix(const SystemParams& p) {
  const double gamma_a = derived_gamma_a(p);
  CouplingMatrix M;
  M.at(0, 0) = cxd(p.Delta1, -(p.gamma_b1 + p.Gamma));
  M.at(0, 1) = cxd(p.g1, -p.Gamma);
  M.at(0, 2) = 0.0;
  M.at(1, 0) = cxd(p.g1, -p.Gamma);
  M.at(1, 1) = cxd(p.Delta_a, -(gamma_a + 2.0 * p.Gamma));
  M.at(1, 2) = cxd(p.g2, -p.Gamma);
  M.at(2, 0) = 0.0;
  M.at(2, 1) = cxd(p.g2, -p.Gamma);
  M.at(2, 2) = cxd(p.Delta2, -(p.gamma_b2 + p.Gamma));
  return M;
}

ComplexSpectrum eigenvalues_closed_form(const AptConfig& apt) {
  const double G = apt.Gamma;
  const cxd S = cxd(2.0 * G * G - 2.0 * apt.g * apt.g - apt.Delta * apt.Delta,
                    4.0 * apt.g * G);
  const cxd r = std::sqrt(S);  // principal branch
  ComplexSpectrum s;
  const cxd i(0.0, 1.0);
  s.lambdas = {-i * (apt.gamma - r), cxd(0.0, -apt.gamma), -i * (apt.gamma + r)};
  sort_spectrum(s.lambdas);
  s.suppression_gap = suppression_gap_of(s.lambdas);
  if (std::abs(r) <= kEpDistanceTol * G) {
    s.phase = Phase::EP;
  } else if (apt.g == 0.0) {
    s.phase = (apt.Delta * apt.Delta < 2.0 * G * G) ? Phase::APT : Phase::APTB;
  } else {
    // Reporting convention only: APT when the square-root argument stays
    // real-positive, APTB otherwise.
    s.phase = (S.imag() == 0.0 && S.real() > 0.0) ? Phase::APT : Phase::APTB;
  }
  return s;
}

ComplexSpectrum eigenvalues_numeric(const CouplingMatrix& M) {
  // det(M - λI) = -λ³ + tr λ² - m2 λ + det, m2 = sum of principal 2-minors.
  const cxd tr = M.at(0, 0) + M.at(1, 1) + M.at(2, 2);
  const cxd m2 = M.at(0, 0) * M.at(1, 1) - M.at(0, 1) * M.at(1, 0) +
                 M.at(0, 0) * M.at(2, 2) - M.at(0, 2) * M.at(2, 0) +
                 M.at(1, 1) * M.at(2, 2) - M.at(1, 2) * M.at(2, 1);
  const cxd det = M.at(0, 0) * (M.at(1, 1) * M.at(2, 2) - M.at(1, 2) * M.at(2, 1)) -
                  M.at(0, 1) * (M.at(1, 0) * M.at(2, 2) - M.at(1, 2) * M.at(2, 0)) +
                  M.at(0, 2) * (M.at(1, 0) * M.at(2, 1) - M.at(1, 1) * M.at(2, 0));

  ComplexSpectrum s;
  s.lambdas = cubic_roots_monic(-tr, m2, -det);
  sort_spectrum(s.lambdas);
  s.suppression_gap = suppression_gap_of(s.lambdas);

  const double scale = std::max(M.max_norm(), 1e-300);
  // Coalescence requires both a tiny eigenvalue spread and a tiny cubic
  // discriminant; the discriminant alone is ill-conditioned near triple roots.
  const cxd d01 = s.lambdas[0] - s.lambdas[1];
  const cxd d02 = s.lambdas[0] - s.lambdas[2];
  const cxd d12 = s.lambdas[1] - s.lambdas[2];
  const double disc = std::abs(d01 * d01 * d02 * d02 * d12 * d12);
  const bool coalesced = min_pair_distance(s.lambdas) <= kEpDistanceTol * scale &&
                         disc <= kEpDistanceTol * scale * scale * scale;
  if (coalesced) {
    s.phase = Phase::EP;
  } else {
    double max_re = 0.0;
    for (const auto& z : s.lambdas) max_re = std::max(max_re, std::abs(z.real()));
    s.phase = (max_re <= kEpDistanceTol * scale) ? Phase::APT : Phase::APTB;
  }
  return s;
}

std::vector<double> suppression_detunings(double gamma_b, double Gamma) {
  if (!(Gamma > 0.0)) throw std::invalid_argument("suppression_detunings: Gamma must be > 0");
  if (gamma_b < 0.0) return {};
  const double S = Gamma * Gamma - gamma_b * gamma_b - 2.0 * Gamma * gamma_b;
  const double tol = 1e-12 * Gamma * Gamma;
  if (S > tol) {
    const double d = std::sqrt(S);
    return {d, -d};
  }
  if (S > -tol) return {0.0};
  return {};
}

Phase classify_phase(const AptConfig& apt) {
  if (apt.g != 0.0) throw std::invalid_argument("classify_phase: requires g == 0");
  const double G2 = apt.Gamma * apt.Gamma;
  const double e = apt.Delta * apt.Delta - 2.0 * G2;
  if (std::abs(e) <= kPhaseTol * G2) return Phase::EP;
  return e < 0.0 ? Phase::APT : Phase::APTB;
}

double apt_defect(const CouplingMatrix& M) {
  // (PT) M (PT)^{-1} = P conj(M) P with P = exchange of rows/cols 1<->3.
  double defect = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const cxd v = std::conj(M.at(2 - r, 2 - c)) + M.at(r, c);
      defect = std::max(defect, std::abs(v));
    }
  return defect;
}

std::array<cxd, 3> match_branches(const std::array<cxd, 3>& previous,
                                  const std::array<cxd, 3>& current) {
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  double best = std::numeric_limits<double>::infinity();
  int best_p = 0;
  for (int p = 0; p < 6; ++p) {
    double d = 0.0;
    for (int k = 0; k < 3; ++k) d += std::abs(previous[k] - current[perms[p][k]]);
    if (d < best) {
      best = d;
      best_p = p;
    }
  }
  return {current[perms[best_p][0]], current[perms[best_p][1]], current[perms[best_p][2]]};
}

}  // namespace aptsense

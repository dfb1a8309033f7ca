#include "aptsense/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aptsense/stability.hpp"

namespace aptsense {

namespace {

BranchSet branches_at(const AptConfig& apt, double detuning, double U, double I,
                      KerrMode which) {
  if (which == KerrMode::Cavity) return cavity_branches(apt, detuning, U, I);
  if (detuning == 0.0) return magnon_branches(apt, U, I);
  return magnon_branches_detuned(apt, detuning, U, I);
}

const Branch& nearest_root(const BranchSet& bs, double prev) {
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

RegimeTag tag_of(const BranchSet& bs, const Branch& tracked) {
  RegimeTag t;
  t.regime = bs.regime;
  t.root_count = static_cast<int>(bs.roots.size());
  t.stable = tracked.stable;
  t.marginal = tracked.marginal;
  return t;
}

}  // namespace

TrackedResponse tracked_response(const AptConfig& apt, double drive_detuning, double U,
                                 double I, KerrMode which, int steps) {
  // Start at resonant drive; the smallest stable root seeds the track.
  BranchSet bs0 = classify_branch_stability(branches_at(apt, 0.0, U, I, which), apt, 0.0,
                                            which, U);
  double prev = bs0.roots.front().response;
  for (const auto& b : bs0.roots)
    if (b.stable) {
      prev = b.response;
      break;
    }

  BranchSet bs = std::move(bs0);
  Branch tracked = nearest_root(bs, prev);
  if (drive_detuning != 0.0) {
    const int n = std::max(1, steps);
    for (int k = 1; k <= n; ++k) {
      const double d = drive_detuning * k / n;
      bs = branches_at(apt, d, U, I, which);
      tracked = nearest_root(bs, prev);
      prev = tracked.response;
    }
    bs = classify_branch_stability(std::move(bs), apt, drive_detuning, which, U);
    tracked = nearest_root(bs, prev);
  }

  TrackedResponse out;
  out.response = tracked.response;
  out.branch = tracked;
  out.tag = tag_of(bs, tracked);
  return out;
}

ResponseRatio response_ratio(const AptConfig& apt, double drive_detuning, double U_small,
                             double U_large, double I, KerrMode which) {
  if (!(U_small > 0.0) || !(U_small <= U_large))
    throw std::invalid_argument("response_ratio: requires 0 < U_small <= U_large");
  const TrackedResponse rs = tracked_response(apt, drive_detuning, U_small, I, which);
  const TrackedResponse rl = tracked_response(apt, drive_detuning, U_large, I, which);
  ResponseRatio out;
  out.eta = rs.response / rl.response;
  out.small_tag = rs.tag;
  out.large_tag = rl.tag;
  return out;
}

FdResult sensitivity_fd(const AptConfig& apt, double U, double I, KerrMode which,
                        double rel_step) {
  if (!(U > 0.0)) throw std::invalid_argument("sensitivity_fd: U must be > 0");
  FdResult out;

  const auto central = [&](double h, bool& boundary) {
    const BranchSet lo = branches_at(apt, 0.0, U - h, I, which);
    const BranchSet hi = branches_at(apt, 0.0, U + h, I, which);
    boundary = lo.roots.size() != hi.roots.size();
    return (hi.roots.back().response - lo.roots.back().response) / (2.0 * h);
  };

  bool boundary1 = false, boundary2 = false;
  const double h = rel_step * U;
  const double d1 = central(h, boundary1);
  const double d2 = central(0.5 * h, boundary2);
  if (boundary1 || boundary2) {
    out.note = "finite-difference step straddles a branch boundary";
    return out;
  }
  out.derivative = d2;
  const double rel = std::abs(d1 - d2) / std::max(std::abs(d2), 1e-300);
  if (rel > 1e-4) {
    out.note = "Richardson check failed";
    return out;
  }
  out.valid = true;
  return out;
}

double fit_loglog_slope(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need matching spans, >= 2 points");
  const size_t n = u.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < n; ++k) {
    const double x = std::log(u[k]);
    const double y = std::log(std::abs(v[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

double fit_scaling_exponent(const AptConfig& apt, std::span<const double> U_grid, double I,
                            KerrMode which) {
  if (U_grid.size() < 8)
    throw std::invalid_argument("fit_scaling_exponent: need >= 8 grid points");
  std::vector<double> us, ds;
  for (double U : U_grid) {
    const FdResult fd = sensitivity_fd(apt, U, I, which);
    if (!fd.valid) continue;
    us.push_back(U);
    ds.push_back(fd.derivative);
  }
  if (us.size() < 8)
    throw std::invalid_argument("fit_scaling_exponent: fewer than 8 usable points");
  return fit_loglog_slope(us, ds);
}

SensitivityReport sensitivity_report(const AptConfig& apt, double drive_detuning,
                                     double U_small, double U_large, double I,
                                     std::span<const double> U_grid, KerrMode which) {
  SensitivityReport rep;
  const ResponseRatio rr = response_ratio(apt, drive_detuning, U_small, U_large, I, which);
  rep.eta = rr.eta;
  rep.small_tag = rr.small_tag;
  rep.large_tag = rr.large_tag;
  const FdResult fd = sensitivity_fd(apt, U_small, I, which);
  rep.dresponse_dU = fd.derivative;
  rep.scaling_exponent = fit_scaling_exponent(apt, U_grid, I, which);
  return rep;
}

}  // namespace aptsense

#pragma once

#include <span>
#include <string>

#include "aptsense/steady_state.hpp"

namespace aptsense {

/// Regime of one endpoint of a response-ratio measurement.
struct RegimeTag {
  Regime regime = Regime::MONOSTABLE;
  int root_count = 1;
  bool stable = true;
  bool marginal = false;
};

/// The response on the branch tracked while sweeping the drive detuning
/// upward from resonance (hysteresis emulation; detuning <= 0 tracks
/// downward). Also reports the endpoint regime.
struct TrackedResponse {
  double response = 0.0;
  Branch branch{};
  RegimeTag tag{};
};

TrackedResponse tracked_response(const AptConfig& apt, double drive_detuning, double U,
                                 double I, KerrMode which, int steps = 64);

/// eta = r(U_small) / r(U_large) on the tracked branch, with the regime tag
/// of each endpoint. Requires 0 < U_small <= U_large.
struct ResponseRatio {
  double eta = 0.0;
  RegimeTag small_tag{};
  RegimeTag large_tag{};
};

ResponseRatio response_ratio(const AptConfig& apt, double drive_detuning, double U_small,
                             double U_large, double I, KerrMode which);

/// Central finite difference of the tracked response with relative step
/// rel_step, Richardson-checked by halving the step (1e-4 relative
/// agreement). A step straddling a branch-count boundary withholds the value.
struct FdResult {
  double derivative = 0.0;
  bool valid = false;
  std::string note;
};

FdResult sensitivity_fd(const AptConfig& apt, double U, double I, KerrMode which,
                        double rel_step = 1e-3);

/// Unweighted least-squares slope of log|v| against log u.
double fit_loglog_slope(std::span<const double> u, std::span<const double> v);

/// Slope of log|d response / d U| vs log U over the given Kerr grid at
/// resonant drive. Requires >= 8 usable grid points (throws otherwise).
double fit_scaling_exponent(const AptConfig& apt, std::span<const double> U_grid, double I,
                            KerrMode which);

/// Bundle of the sensitivity observables at one operating point.
struct SensitivityReport {
  double eta = 0.0;
  double dresponse_dU = 0.0;
  double scaling_exponent = 0.0;
  RegimeTag small_tag{};
  RegimeTag large_tag{};
};

SensitivityReport sensitivity_report(const AptConfig& apt, double drive_detuning,
                                     double U_small, double U_large, double I,
                                     std::span<const double> U_grid, KerrMode which);

}  // namespace aptsense

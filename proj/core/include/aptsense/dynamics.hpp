#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "aptsense/params.hpp"
#include "aptsense/steady_state.hpp"

namespace aptsense {

using Amplitudes = std::array<cxd, 3>;  // (beta1, alpha, beta2)

struct TrajectoryState {
  double t = 0.0;
  Amplitudes v{};
};

/// Mean-field right-hand side: -i H v - 2i R v + (0, Omega, 0) with
/// R = diag(U_b1 |beta1|^2, U_a |alpha|^2, U_b2 |beta2|^2).
Amplitudes rhs(const SystemParams& p, const Amplitudes& v);

enum class IntegrationStatus { CONVERGED, DIVERGED, NOT_CONVERGED };

const char* to_string(IntegrationStatus s);

struct IntegrationOptions {
  double t_max = 200.0;      // in units of 1/Gamma
  double tol = 1e-9;         // steady when ‖rhs‖ <= tol·Gamma·‖v‖, sustained
  double step_factor = 0.01; // h = step_factor / max_rate
  int record_every = 0;      // 0: no trajectory recording
};

struct IntegrationResult {
  IntegrationStatus status = IntegrationStatus::NOT_CONVERGED;
  SteadyState state{};
  double t_end = 0.0;
  std::uint64_t steps = 0;
  double residual = 0.0;  // ‖rhs‖ / (Gamma·‖v‖) at the end
  std::vector<TrajectoryState> trajectory;
};

/// Fixed-step 4th-order Runge–Kutta integration of the mean-field flow until
/// the steady criterion holds over a 10/Gamma window, the state diverges
/// (‖v‖ > 1e6 × its initial scale, or non-finite), or t_max elapses.
IntegrationResult integrate_to_steady(const SystemParams& p, const Amplitudes& v0,
                                      const IntegrationOptions& opt = {});

/// v plus a relative perturbation in a seeded random complex direction.
Amplitudes perturbed(const Amplitudes& v, double rel, std::uint64_t seed);

}  // namespace aptsense

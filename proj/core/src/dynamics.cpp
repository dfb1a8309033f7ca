#include "aptsense/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aptsense/spectrum.hpp"

namespace aptsense {

Amplitudes rhs(const SystemParams& p, const Amplitudes& v) {
  const CouplingMatrix H = build_matrix(p);
  const cxd i(0.0, 1.0);
  Amplitudes out{};
  for (int r = 0; r < 3; ++r) {
    cxd acc(0.0);
    for (int c = 0; c < 3; ++c) acc += H.at(r, c) * v[size_t(c)];
    out[size_t(r)] = -i * acc;
  }
  out[0] -= 2.0 * i * p.U_b1 * std::norm(v[0]) * v[0];
  out[1] -= 2.0 * i * p.U_a * std::norm(v[1]) * v[1];
  out[2] -= 2.0 * i * p.U_b2 * std::norm(v[2]) * v[2];
  out[1] += p.Omega;
  return out;
}

const char* to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::CONVERGED: return "CONVERGED";
    case IntegrationStatus::DIVERGED: return "DIVERGED";
    case IntegrationStatus::NOT_CONVERGED: return "NOT_CONVERGED";
  }
  return "?";
}

namespace {

double norm2(const Amplitudes& v) {
  return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

bool finite(const Amplitudes& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double max_rate(const SystemParams& p, const Amplitudes& v) {
  const double gamma_a = derived_gamma_a(p);
  double m = p.Gamma;
  m = std::max(m, std::abs(p.Delta1) + p.gamma_b1 + p.Gamma);
  m = std::max(m, std::abs(p.Delta2) + p.gamma_b2 + p.Gamma);
  m = std::max(m, std::abs(p.Delta_a) + std::abs(gamma_a) + 2.0 * p.Gamma);
  m = std::max(m, std::abs(p.g1) + p.Gamma);
  m = std::max(m, std::abs(p.g2) + p.Gamma);
  m = std::max(m, 4.0 * std::abs(p.U_b1) * std::norm(v[0]));
  m = std::max(m, 4.0 * std::abs(p.U_a) * std::norm(v[1]));
  m = std::max(m, 4.0 * std::abs(p.U_b2) * std::norm(v[2]));
  return m;
}

}  // namespace

IntegrationResult integrate_to_steady(const SystemParams& p, const Amplitudes& v0,
                                      const IntegrationOptions& opt) {
  if (!(opt.t_max > 0.0) || !(opt.tol > 0.0))
    throw std::invalid_argument("integrate_to_steady: t_max and tol must be > 0");

  IntegrationResult res;
  Amplitudes v = v0;
  const double G = p.Gamma;
  const double scale0 = std::max({norm2(v0), p.Omega / G, 1e-300});
  const double t_max = opt.t_max / G;
  const double window = 10.0 / G;  // steady criterion must hold this long
  // Floor keeps the relative criterion meaningful for decay to the zero state.
  const double v_floor = 1e-3 * scale0;

  double t = 0.0;
  double steady_since = -1.0;

  if (opt.record_every > 0) res.trajectory.push_back({t, v});

  while (t < t_max) {
    const double h = opt.step_factor / max_rate(p, v);
    const Amplitudes k1 = rhs(p, v);
    Amplitudes u;
    for (int j = 0; j < 3; ++j) u[size_t(j)] = v[size_t(j)] + 0.5 * h * k1[size_t(j)];
    const Amplitudes k2 = rhs(p, u);
    for (int j = 0; j < 3; ++j) u[size_t(j)] = v[size_t(j)] + 0.5 * h * k2[size_t(j)];
    const Amplitudes k3 = rhs(p, u);
    for (int j = 0; j < 3; ++j) u[size_t(j)] = v[size_t(j)] + h * k3[size_t(j)];
    const Amplitudes k4 = rhs(p, u);
    for (int j = 0; j < 3; ++j)
      v[size_t(j)] += h / 6.0 * (k1[size_t(j)] + 2.0 * k2[size_t(j)] + 2.0 * k3[size_t(j)] + k4[size_t(j)]);
    t += h;
    ++res.steps;

    if (!finite(v) || norm2(v) > 1e6 * scale0) {
      res.status = IntegrationStatus::DIVERGED;
      res.state = make_steady(v[0], v[1], v[2]);
      res.t_end = t;
      return res;
    }
    if (opt.record_every > 0 && res.steps % static_cast<std::uint64_t>(opt.record_every) == 0)
      res.trajectory.push_back({t, v});

    const double r = norm2(rhs(p, v));
    const double ref = G * std::max(norm2(v), v_floor);
    if (r <= opt.tol * ref) {
      if (steady_since < 0.0) steady_since = t;
      if (t - steady_since >= window) {
        res.status = IntegrationStatus::CONVERGED;
        break;
      }
    } else {
      steady_since = -1.0;
    }
  }

  res.state = make_steady(v[0], v[1], v[2]);
  res.t_end = t;
  res.residual = norm2(rhs(p, v)) / (G * std::max(norm2(v), v_floor));
  if (opt.record_every > 0) res.trajectory.push_back({t, v});
  return res;
}

Amplitudes perturbed(const Amplitudes& v, double rel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Amplitudes dir{};
  double nn = 0.0;
  for (auto& z : dir) {
    z = cxd(n(rng), n(rng));
    nn += std::norm(z);
  }
  nn = std::sqrt(nn);
  const double scale = std::max(norm2(v), 1.0) * rel / nn;
  Amplitudes out = v;
  for (int k = 0; k < 3; ++k) out[size_t(k)] += scale * dir[size_t(k)];
  return out;
}

}  // namespace aptsense

#include "aptsense/params.hpp"

#include <cmath>

#include "aptsense/constants.hpp"

namespace aptsense {

double derived_gamma_a(const SystemParams& p) {
  return p.kappa_minus - p.kappa_plus;
}

void validate(const SystemParams& p) {
  if (!(p.Gamma > 0.0)) throw std::invalid_argument("SystemParams: Gamma must be > 0");
  if (p.kappa_minus < 0.0) throw std::invalid_argument("SystemParams: kappa_minus must be >= 0");
  if (p.kappa_plus < 0.0) throw std::invalid_argument("SystemParams: kappa_plus must be >= 0");
  if (p.gamma_b1 < 0.0 || p.gamma_b2 < 0.0)
    throw std::invalid_argument("SystemParams: magnon decay rates must be >= 0");
}

SystemParams normalize(const SystemParams& p) {
  if (!(p.Gamma > 0.0)) throw std::invalid_argument("normalize: Gamma must be > 0");
  const double s = 1.0 / p.Gamma;
  SystemParams q = p;
  q.Gamma = 1.0;
  q.gamma_b1 *= s;
  q.gamma_b2 *= s;
  q.kappa_minus *= s;
  q.kappa_plus *= s;
  q.Delta1 *= s;
  q.Delta2 *= s;
  q.Delta_a *= s;
  q.g1 *= s;
  q.g2 *= s;
  q.U_a *= s;
  q.U_b1 *= s;
  q.U_b2 *= s;
  q.Omega *= s;
  return q;
}

SystemParams denormalize(const SystemParams& p, double Gamma) {
  if (!(Gamma > 0.0)) throw std::invalid_argument("denormalize: Gamma must be > 0");
  SystemParams q = p;
  q.Gamma = Gamma;
  q.gamma_b1 *= Gamma;
  q.gamma_b2 *= Gamma;
  q.kappa_minus *= Gamma;
  q.kappa_plus *= Gamma;
  q.Delta1 *= Gamma;
  q.Delta2 *= Gamma;
  q.Delta_a *= Gamma;
  q.g1 *= Gamma;
  q.g2 *= Gamma;
  q.U_a *= Gamma;
  q.U_b1 *= Gamma;
  q.U_b2 *= Gamma;
  q.Omega *= Gamma;
  return q;
}

SystemParams AptConfig::expand(double kappa_minus) const {
  if (!(Gamma > 0.0)) throw std::invalid_argument("AptConfig: Gamma must be > 0");
  if (gamma < Gamma)
    throw std::invalid_argument("AptConfig: gamma >= Gamma required (gamma_b >= 0)");
  const double gamma_b = gamma - Gamma;
  const double gamma_a = gamma - 2.0 * Gamma;
  double km = kappa_minus >= 0.0 ? kappa_minus : 0.05 * Gamma;
  if (km < gamma_a) km = gamma_a;  // keep kappa_plus >= 0
  // Settle the (kappa_minus, kappa_plus) pair so kappa_minus - kappa_plus
  // reproduces gamma_a exactly in floating point.
  double kp = km - gamma_a;
  for (int it = 0; it < 8 && km - kp != gamma_a; ++it) {
    km = kp + gamma_a;
    kp = km - gamma_a;
  }
  SystemParams p;
  p.Gamma = Gamma;
  p.gamma_b1 = gamma_b;
  p.gamma_b2 = gamma_b;
  p.kappa_minus = km;
  p.kappa_plus = kp;
  p.Delta1 = Delta;
  p.Delta2 = -Delta;
  p.Delta_a = 0.0;
  p.g1 = g;
  p.g2 = g;
  return p;
}

double ep_condition(const AptConfig& apt) {
  return apt.Delta * apt.Delta + apt.gamma * apt.gamma - 2.0 * apt.Gamma * apt.Gamma;
}

double drive_amplitude(const DriveSpec& d) {
  if (d.power < 0.0) throw std::invalid_argument("drive_amplitude: power must be >= 0");
  if (!(d.wavelength > 0.0)) throw std::invalid_argument("drive_amplitude: wavelength must be > 0");
  if (d.kappa_minus < 0.0) throw std::invalid_argument("drive_amplitude: kappa_minus must be >= 0");
  const double omega_d = constants::two_pi * constants::speed_of_light / d.wavelength;
  return std::sqrt(d.power * d.kappa_minus / (constants::hbar * omega_d));
}

}  // namespace aptsense

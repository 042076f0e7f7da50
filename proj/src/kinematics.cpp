#include "dmsfi/kinematics.hpp"

#include "dmsfi/units.hpp"

#include <algorithm>
#include <cmath>

namespace dmsfi::kinematics {

using units::kPi;

namespace {

double half_cycle_phase(const LaserField& field, double t) {
  const double x = field.phase(t);
  if (!(std::abs(x) < kPi / 2))
    throw DomainError("birth time outside the half-cycle |omega t + cep| < pi/2");
  return x;
}

double kappa_perp(double kappa, double p_perp) { return std::sqrt(kappa * kappa + p_perp * p_perp); }

// p_z as a function of the carrier phase x, for gamma0 = omega kappa_perp / F0
double pz_of_phase(double F0, double omega, double gamma0, double x) {
  const double c = std::cos(x);
  return F0 / omega * std::tan(x) * std::sqrt(c * c + gamma0 * gamma0);
}

double dpz_dphase(double F0, double omega, double gamma0, double x) {
  const double c = std::cos(x);
  const double q = c * c + gamma0 * gamma0;
  return F0 / omega * (c * c + gamma0 * gamma0 / (c * c)) / std::sqrt(q);
}

}  // namespace

double gamma_perp(const LaserField& field, double kappa, double p_perp, double t) {
  const double c = std::abs(std::cos(field.phase(t)));
  return field.omega() * kappa_perp(kappa, p_perp) / (field.F0() * c);
}

double pz_of_birth(const LaserField& field, double kappa, double p_perp, double t) {
  const double x = half_cycle_phase(field, t);
  const double g0 = field.omega() * kappa_perp(kappa, p_perp) / field.F0();
  return pz_of_phase(field.F0(), field.omega(), g0, x);
}

double dpz_dt(const LaserField& field, double kappa, double p_perp, double t) {
  const double x = half_cycle_phase(field, t);
  const double g0 = field.omega() * kappa_perp(kappa, p_perp) / field.F0();
  return field.omega() * dpz_dphase(field.F0(), field.omega(), g0, x);
}

double birth_of_pz(const LaserField& field, double kappa, double p_z, double p_perp) {
  if (!std::isfinite(p_z)) throw DomainError("birth_of_pz: p_z must be finite");
  const double F0 = field.F0(), w = field.omega();
  const double g0 = w * kappa_perp(kappa, p_perp) / F0;
  const double eps = 1e-9;
  double lo = -kPi / 2 + eps, hi = kPi / 2 - eps;
  auto r = [&](double x) { return pz_of_phase(F0, w, g0, x) - p_z; };
  double x = 0.0;
  if (r(lo) >= 0) {
    x = lo;
  } else if (r(hi) <= 0) {
    x = hi;
  } else {
    x =std::atan(p_z * w / (F0 * std::sqrt(1.0 + g0 * g0)));
    for (int it = 0; it < 200; ++it) {
      const double fx = r(x);
      if (fx == 0.0) break;
      if (fx > 0) hi = x; else lo = x;
      double xn = x - fx / dpz_dphase(F0, w, g0, x);
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      const double step = std::abs(xn - x);
      x = xn;
      if (step < 1e-15 * std::max(1.0, std::abs(x)) || hi - lo < 1e-15) break;
    }
  }
  return (x - field.cep()) / w;
}

SaddleSolution saddle(const LaserField& field, double kappa, double p_perp, double t) {
  SaddleSolution s;
  s.t_birth = t;
  s.p_perp = p_perp;
  s.p_z = pz_of_birth(field, kappa, p_perp, t);
  s.v_z = s.p_z - field.F0() * std::sin(field.phase(t)) / field.omega();
  s.gamma_perp_t = gamma_perp(field, kappa, p_perp, t);
  s.tau_tunnel = std::asinh(s.gamma_perp_t) / field.omega();
  return s;
}

double action_real(const LaserField& field, double E, double p_perp, double p_z, double t,
                   double t_birth) {
  const double w = field.omega(), F0 = field.F0();
  const double up = field.ponderomotive();
  const double kappa = std::sqrt(2.0 * E);
  const double gb = gamma_perp(field, kappa, p_perp, t_birth);
  const double xb = field.phase(t_birth), x = field.phase(t);
  const double p2 = p_perp * p_perp + p_z * p_z;
  return (E + 0.5 * p2 + up) * (t - t_birth) +
         p_z * F0 / (w * w) * (std::cos(x) - std::cos(xb) * std::sqrt(1.0 + gb * gb)) -
         up / (2.0 * w) * (std::sin(2.0 * x) - std::sin(2.0 * xb) * (1.0 + 2.0 * gb * gb));
}

double action_imag(const LaserField& field, double E, double p_perp, double t_birth) {
  const double w = field.omega(), F0 = field.F0();
  const double up = field.ponderomotive();
  const double kappa = std::sqrt(2.0 * E);
  const double xb = half_cycle_phase(field, t_birth);
  const double gb = gamma_perp(field, kappa, p_perp, t_birth);
  const double pz = pz_of_birth(field, kappa, p_perp, t_birth);
  const double p2 = p_perp * p_perp + pz * pz;
  return -(E + 0.5 * p2 + up) * std::asinh(gb) / w + pz * F0 / (w * w) * gb * std::sin(xb) +
         up / w * gb * std::sqrt(1.0 + gb * gb) * std::cos(2.0 * xb);
}

ComplexAction action(const LaserField& field, double E, double p_perp, double t, double t_birth) {
  const double pz = pz_of_birth(field, std::sqrt(2.0 * E), p_perp, t_birth);
  return {action_real(field, E, p_perp, pz, t, t_birth), action_imag(field, E, p_perp, t_birth)};
}

double energy_spread(const LaserField& field, double E, double p_perp, double p_z, double t) {
  const double vz = p_z - field.F0() * std::sin(field.phase(t)) / field.omega();
  return E + 0.5 * (p_perp * p_perp + vz * vz);
}

BirthDelay birth_delay(const LaserField& field, double E1, double E2, double p_perp, double t) {
  BirthDelay d;
  d.t1 = t;
  d.p_z = pz_of_birth(field, std::sqrt(2.0 * E1), p_perp, t);
  d.t2 = birth_of_pz(field, std::sqrt(2.0 * E2), d.p_z, p_perp);
  d.sigma_t = 1.0 / energy_spread(field, E2, p_perp, d.p_z, d.t2);
  d.ratio = std::abs(d.t2 - d.t1) / d.sigma_t;
  return d;
}

}  // namespace dmsfi::kinematics

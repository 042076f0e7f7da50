#pragma once

#include "dmsfi/laser.hpp"

#include <stdexcept>

namespace dmsfi::kinematics {

// Saddle-point kinematics for a carrier of constant amplitude F0 (the
// envelope is ignored here). Times are a.u.; E is the binding energy in a.u.
// Birth times live in the half-cycle where omega t + cep is in (-pi/2, pi/2).

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SaddleSolution {
  double t_birth = 0.0;
  double p_perp = 0.0;
  double p_z = 0.0;
  double v_z = 0.0;
  double tau_tunnel = 0.0;    // imaginary part of the complex saddle time
  double gamma_perp_t = 0.0;  // omega kappa_perp / |F(t)|
};

struct ComplexAction {
  double re_S = 0.0;
  double im_S = 0.0;
};

/// gamma(p_perp, t) = omega sqrt(kappa^2 + p_perp^2) / |F0 cos(omega t + cep)|.
double gamma_perp(const LaserField& field, double kappa, double p_perp, double t);

double pz_of_birth(const LaserField& field, double kappa, double p_perp, double t);

/// dp_z/dt, strictly positive on the open half-cycle.
double dpz_dt(const LaserField& field, double kappa, double p_perp, double t);

/// Inverse of pz_of_birth on the open half-cycle (bracketed Newton).
double birth_of_pz(const LaserField& field, double kappa, double p_z, double p_perp);

SaddleSolution saddle(const LaserField& field, double kappa, double p_perp, double t);

/// Re S_p(t, t_b) for the momentum (p_perp, p_z) born at t_b. Its time
/// derivative is E + [p + A(t)]^2 / 2.
double action_real(const LaserField& field, double E, double p_perp, double p_z, double t,
                   double t_birth);

/// Im S_p at the birth time of (p_perp, t_birth); p_z follows from the saddle.
double action_imag(const LaserField& field, double E, double p_perp, double t_birth);

ComplexAction action(const LaserField& field, double E, double p_perp, double t, double t_birth);

/// Energy spread E + [p + A(t)]^2/2 of an electron of momentum (p_perp, p_z) at t.
double energy_spread(const LaserField& field, double E, double p_perp, double p_z, double t);

struct BirthDelay {
  double t1 = 0.0, t2 = 0.0;  // birth times of the shared p_z
  double p_z = 0.0;
  double sigma_t = 0.0;       // 1 / energy spread of channel 2 at t2
  double ratio = 0.0;         // |t2 - t1| / sigma_t
};

/// Birth delay between two channels for the p_z that channel 1 (the lower
/// binding energy E1) produces at time t.
BirthDelay birth_delay(const LaserField& field, double E1, double E2, double p_perp, double t);

inline double birth_delay_ratio(const LaserField& field, double E1, double E2, double p_perp,
                                double t) {
  return birth_delay(field, E1, E2, p_perp, t).ratio;
}

}  // namespace dmsfi::kinematics

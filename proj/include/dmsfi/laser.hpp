#pragma once

#include <string>

namespace dmsfi {

/// Rates are exactly zero when F0 f(t) |cos(omega t + cep)| drops below this.
inline constexpr double kFieldFloor = 1e-8;

enum class EnvelopeKind { Cw, CosineSquare, Gaussian };

/// Which quantity the FWHM refers to. Pulse durations are quoted as
/// intensity FWHM by default.
enum class FwhmOf { Intensity, Field };

EnvelopeKind parse_envelope(const std::string& s);
std::string to_string(EnvelopeKind k);
FwhmOf parse_fwhm_of(const std::string& s);
std::string to_string(FwhmOf k);

struct LaserParams {
  double intensity_W_cm2 = 1e14;
  double wavelength_nm = 800.0;
  double fwhm_fs = 0.0;  // unused for Cw
  EnvelopeKind envelope = EnvelopeKind::Cw;
  double cep_rad = 0.0;
  FwhmOf fwhm_of = FwhmOf::Intensity;
};

/// Linearly polarized pulse F(t) = F0 f(t) cos(omega t + cep) along z.
/// Immutable; all times in atomic units, t = 0 at the envelope peak.
class LaserField {
 public:
  explicit LaserField(const LaserParams& p);

  const LaserParams& params() const { return p_; }
  double F0() const { return F0_; }
  double omega() const { return omega_; }
  double period() const;
  double cep() const { return p_.cep_rad; }
  EnvelopeKind envelope_kind() const { return p_.envelope; }

  /// f(t) in [0, 1], zero outside [t_start, t_end] for finite pulses.
  double envelope(double t) const;
  /// Local amplitude F0 f(t).
  double amplitude(double t) const { return F0_ * envelope(t); }
  double phase(double t) const { return omega_ * t + p_.cep_rad; }
  double field_at(double t) const;
  /// Slowly-varying-envelope vector potential -(F0 f(t)/omega) sin(omega t + cep).
  double vector_potential(double t) const;

  /// omega*kappa/F0.
  double keldysh(double kappa) const;
  /// F0^2 / (4 omega^2).
  double ponderomotive() const;

  /// Simulation window. Gaussian: [-T, 2T] with T the FWHM; cos^2: the
  /// support [-tau/2, tau/2]; cw: one optical cycle centred on 0.
  double t_start() const { return t0_; }
  double t_end() const { return t1_; }

  /// cos^2 envelope parameter (total duration of the support).
  double cos2_tau() const { return tau_; }

 private:
  LaserParams p_;
  double F0_, omega_;
  double fwhm_au_ = 0.0;
  double gauss_a_ = 0.0;  // f = exp(-gauss_a t^2)
  double tau_ = 0.0;
  double t0_ = 0.0, t1_ = 0.0;
};

}  // namespace dmsfi

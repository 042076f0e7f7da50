#include "dmsfi/laser.hpp"

#include "dmsfi/units.hpp"

#include <cmath>
#include <stdexcept>

namespace dmsfi {

using units::kPi;

EnvelopeKind parse_envelope(const std::string& s) {
  if (s == "cw" || s == "cw-sinusoid") return EnvelopeKind::Cw;
  if (s == "cos2" || s == "cosine-square") return EnvelopeKind::CosineSquare;
  if (s == "gaussian") return EnvelopeKind::Gaussian;
  throw std::invalid_argument("unknown envelope '" + s + "' (cw, cosine-square, gaussian)");
}

std::string to_string(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::Cw: return "cw";
    case EnvelopeKind::CosineSquare: return "cosine-square";
    case EnvelopeKind::Gaussian: return "gaussian";
  }
  return "?";
}

FwhmOf parse_fwhm_of(const std::string& s) {
  if (s == "intensity") return FwhmOf::Intensity;
  if (s == "field") return FwhmOf::Field;
  throw std::invalid_argument("unknown fwhm_of '" + s + "' (intensity, field)");
}

std::string to_string(FwhmOf k) { return k == FwhmOf::Intensity ? "intensity" : "field"; }

LaserField::LaserField(const LaserParams& p) : p_(p) {
  if (!(p.intensity_W_cm2 >= 0.0)) throw std::invalid_argument("intensity must be >= 0");
  if (!(p.wavelength_nm > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  F0_ = units::intensity_to_field(p.intensity_W_cm2);
  omega_ = units::wavelength_to_omega(p.wavelength_nm);
  fwhm_au_ = units::fs_to_au(p.fwhm_fs);
  // power of f whose half-maximum defines the FWHM
  const double n = p.fwhm_of == FwhmOf::Intensity ? 2.0 : 1.0;
  switch (p.envelope) {
    case EnvelopeKind::Cw:
      t0_ = -period() / 2;
      t1_ = period() / 2;
      break;
    case EnvelopeKind::Gaussian:
      if (!(fwhm_au_ > 0.0)) throw std::invalid_argument("gaussian envelope needs fwhm_fs > 0");
      gauss_a_ = 4.0 * std::log(2.0) / (n * fwhm_au_ * fwhm_au_);
      t0_ = -fwhm_au_;
      t1_ = 2.0 * fwhm_au_;
      break;
    case EnvelopeKind::CosineSquare: {
      if (!(fwhm_au_ > 0.0)) throw std::invalid_argument("cosine-square envelope needs fwhm_fs > 0");
      // cos^(2n)(pi t/tau) = 1/2 at t = fwhm/2
      const double x = std::acos(std::pow(0.5, 1.0 / (2.0 * n)));
      tau_ = kPi * fwhm_au_ / (2.0 * x);
      t0_ = -tau_ / 2;
      t1_ = tau_ / 2;
      break;
    }
  }
}

double LaserField::period() const { return 2.0 * kPi / omega_; }

double LaserField::envelope(double t) const {
  switch (p_.envelope) {
    case EnvelopeKind::Cw: return 1.0;
    case EnvelopeKind::Gaussian:
      if (t < t0_ || t > t1_) return 0.0;
      return std::exp(-gauss_a_ * t * t);
    case EnvelopeKind::CosineSquare: {
      if (t <= t0_ || t >= t1_) return 0.0;
      const double c = std::cos(kPi * t / tau_);
      return c * c;
    }
  }
  return 0.0;
}

double LaserField::field_at(double t) const { return amplitude(t) * std::cos(phase(t)); }

double LaserField::vector_potential(double t) const {
  return -amplitude(t) / omega_ * std::sin(phase(t));
}

double LaserField::keldysh(double kappa) const {
  if (!(kappa > 0.0)) throw std::invalid_argument("keldysh: kappa must be > 0");
  return omega_ * kappa / F0_;
}

double LaserField::ponderomotive() const { return F0_ * F0_ / (4.0 * omega_ * omega_); }

}  // namespace dmsfi

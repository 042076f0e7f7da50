#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace dmsfi {

class LaserField;

namespace specialfn {

/// Thrown for arguments outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt, which equals
/// (sqrt(pi)/2) exp(-x^2) erfi(x). Odd in x; absolute/relative error
/// below 1e-13 for all finite x.
double dawson(double x);

/// w_0(x) of the photon sum; identical to dawson() for x >= 0.
double dawson_w0(double x);

/// w_m(x) = x^(2|m|+1)/2 * int_0^1 exp(-x^2 t) t^|m| / sqrt(1-t) dt.
/// m = 0 uses the closed form; |m| > 0 uses adaptive quadrature after the
/// substitution t = 1 - u^2 (tolerance 1e-10).
double w_m(int m, double x);

/// PPT g(gamma): exponent correction at the field crest, g -> 1 as gamma -> 0.
double g_of_gamma(double gamma);

/// Coefficient of the quadratic term in g(t) ~ g(gamma_K) + (omega t)^2 h.
double h_of_gamma(double gamma);

/// Subcycle exponent factor for a given local Keldysh parameter
/// gamma0 = omega*kappa_perp/F_amp and carrier phase (omega t + cep).
/// Returns +infinity when cos(phase) vanishes.
double g_phase(double gamma0, double phase);

/// g(p_perp, t) for a laser field: uses the local envelope amplitude
/// F0 f(t) and phase omega t + cep. Returns +infinity below the field floor.
double g_subcycle(double p_perp, double t, const LaserField& field, double kappa);

/// Photon-sum parameters.
double ppt_alpha(double gamma);
double ppt_beta(double gamma);
double ppt_nu(double E, double omega, double gamma);

struct PhotonSumOptions {
  double term_tolerance = 1e-12;
  /// Terms summed explicitly before the Euler-Maclaurin remainder takes over.
  int max_terms = 4096;
};

/// A_m(omega, gamma) of the PPT rate (normalized so that A_m -> 1 as
/// gamma -> 0).
double A_m(double omega, double gamma, double E, int m,
           const PhotonSumOptions& opts = {});

/// Cached g, h and A_m for one Keldysh parameter.
class PptFunctions {
 public:
  explicit PptFunctions(double gamma_K);
  double gamma_K() const { return gamma_; }
  double g() const { return g_; }
  double h() const { return h_; }
  double A(double omega, double E, int m = 0) const { return A_m(omega, gamma_, E, m); }

 private:
  double gamma_, g_, h_;
};

double factorial(int n);

/// Q(l, m) = (-1)^((m+|m|)/2) sqrt((2l+1)/2 * (l+|m|)!/(l-|m|)!).
double Q_factor(int l, int m);

/// Euler angles in the z-y-z convention; R = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Wigner small-d matrix element d^l_{m m'}(beta).
double wigner_small_d(int l, int m, int mp, double beta);

/// D^l_{m m'}(R) = exp(-i m alpha) d^l_{m m'}(beta) exp(-i m' gamma), rows and
/// columns indexed m + l.
Eigen::MatrixXcd wigner_D(int l, const EulerAngles& euler);

/// Active rotation matrix of the same Euler angles, acting on Cartesian vectors.
Eigen::Matrix3d rotation_matrix(const EulerAngles& euler);

/// D matrices for l = 0..max_l for a fixed orientation.
class WignerRotation {
 public:
  WignerRotation(const EulerAngles& euler, int max_l);
  const EulerAngles& angles() const { return euler_; }
  int max_l() const { return max_l_; }
  std::complex<double> element(int l, int m, int mp) const;
  const Eigen::MatrixXcd& matrix(int l) const { return D_.at(l); }

 private:
  EulerAngles euler_;
  int max_l_;
  std::vector<Eigen::MatrixXcd> D_;
};

}  // namespace specialfn
}  // namespace dmsfi

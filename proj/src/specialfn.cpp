#include "dmsfi/specialfn.hpp"

#include "dmsfi/laser.hpp"
#include "dmsfi/quadrature.hpp"
#include "dmsfi/units.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace dmsfi::specialfn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Horner in y = x^2 for c0 + c1 y + c2 y^2 + ...
template <std::size_t N>
double poly(const std::array<double, N>& c, double y) {
  double s = 0.0;
  for (std::size_t k = N; k-- > 0;) s = s * y + c[k];
  return s;
}

constexpr double kSeriesCut = 0.1;

// asinh(x) - x sqrt(1+x^2) = x^3 * (...)
double q_minus(double x) {
  if (x < kSeriesCut) {
    static constexpr std::array<double, 7> c = {
        -2.0 / 3, 1.0 / 5, -3.0 / 28, 5.0 / 72, -35.0 / 704, 63.0 / 1664, -77.0 / 2560};
    return x * x * x * poly(c, x * x);
  }
  return std::asinh(x) - x * std::sqrt(1.0 + x * x);
}

// (1+x^2) asinh(x) - x sqrt(1+x^2) = x^3 * (...)
double r_plus(double x) {
  if (x < kSeriesCut) {
    static constexpr std::array<double, 7> c = {
        1.0 / 3, 1.0 / 30, -9.0 / 280, 25.0 / 1008, -245.0 / 12672, 567.0 / 36608, -847.0 / 66560};
    return x * x * x * poly(c, x * x);
  }
  return (1.0 + x * x) * std::asinh(x) - x * std::sqrt(1.0 + x * x);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

double dawson(double x) {
  if (x < 0.0) return -dawson(-x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 0.0;
  if (x < 7.5) {
    // exp(-x^2) * sum x^(2n+1) / (n! (2n+1)), all terms positive
    const double y = x * x;
    double p = x, sum = x;
    for (int n = 1; n < 400; ++n) {
      p *= y / n;
      const double term = p / (2 * n + 1);
      sum += term;
      if (n > y && term < 1e-17 * sum) break;
    }
    return std::exp(-y) * sum;
  }
  // 1/(2x) * sum (2k-1)!! / (2x^2)^k
  const double z = 2.0 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2 * k - 1) / z;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / (2.0 * x);
}

double dawson_w0(double x) {
  if (x < 0.0) throw DomainError("dawson_w0: x must be >= 0");
  return dawson(x);
}

double w_m(int m, double x) {
  if (x < 0.0) throw DomainError("w_m: x must be >= 0");
  const int am = std::abs(m);
  if (am == 0) return dawson(x);
  if (x == 0.0) return 0.0;
  const double y = x * x;
  auto f = [&](double u) {
    const double t = 1.0 - u * u;
    return std::exp(-y * t) * std::pow(t, am);
  };
  // most of the weight sits within ~1/x^2 of u = 1
  std::vector<double> edges{0.0};
  const double knee = std::max(0.0, 1.0 - 8.0 / y);
  if (knee > 0.0) edges.push_back(knee);
  edges.push_back(1.0);
  const auto r = quad::gauss_kronrod_panels(f, edges, 1e-12);
  return std::pow(x, 2 * am + 1) * r.value;
}

double g_phase(double gamma0, double phase) {
  require_positive(gamma0, "g_phase: gamma0");
  const double c = std::abs(std::cos(phase));
  if (c == 0.0) return kInf;
  const double s2 = std::sin(phase) * std::sin(phase);
  const double gt = gamma0 / c;
  const double g02 = gamma0 * gamma0;
  // bracket regrouped so that the small-gamma cancellations happen inside
  // q_minus and r_plus
  const double bracket = std::asinh(gt) + q_minus(gt) / (2.0 * g02) + s2 * r_plus(gt) / g02;
  return 1.5 / gamma0 * bracket;
}

double g_of_gamma(double gamma) {
  require_positive(gamma, "g_of_gamma: gamma");
  return g_phase(gamma, 0.0);
}

double h_of_gamma(double gamma) {
  require_positive(gamma, "h_of_gamma: gamma");
  if (gamma < kSeriesCut) {
    static constexpr std::array<double, 7> c = {
        1.0 / 2, 1.0 / 20, -27.0 / 560, 25.0 / 672, -245.0 / 8448, 1701.0 / 73216, -2541.0 / 133120};
    return poly(c, gamma * gamma);
  }
  const double g2 = gamma * gamma;
  const double sq = std::sqrt(1.0 + g2);
  const double a = 1.0 + 1.0 / g2;
  return 0.75 / gamma * (2.0 * a * std::asinh(gamma) - 3.0 * sq / gamma + a * gamma / sq);
}

double g_subcycle(double p_perp, double t, const LaserField& field, double kappa) {
  const double amp = field.amplitude(t);
  const double phase = field.phase(t);
  if (amp * std::abs(std::cos(phase)) < kFieldFloor) return kInf;
  const double kperp = std::sqrt(kappa * kappa + p_perp * p_perp);
  return g_phase(field.omega() * kperp / amp, phase);
}

double ppt_alpha(double gamma) {
  require_positive(gamma, "ppt_alpha: gamma");
  if (gamma < kSeriesCut) {
    static constexpr std::array<double, 7> c = {
        2.0 / 3, -3.0 / 5, 15.0 / 28, -35.0 / 72, 315.0 / 704, -693.0 / 1664, 1001.0 / 2560};
    return gamma * gamma * gamma * poly(c, gamma * gamma);
  }
  return 2.0 * (std::asinh(gamma) - gamma / std::sqrt(1.0 + gamma * gamma));
}

double ppt_beta(double gamma) {
  require_positive(gamma, "ppt_beta: gamma");
  return 2.0 * gamma / std::sqrt(1.0 + gamma * gamma);
}

double ppt_nu(double E, double omega, double gamma) {
  require_positive(gamma, "ppt_nu: gamma");
  return E / omega * (1.0 + 1.0 / (2.0 * gamma * gamma));
}

double A_m(double omega, double gamma, double E, int m, const PhotonSumOptions& opts) {
  require_positive(omega, "A_m: omega");
  require_positive(gamma, "A_m: gamma");
  require_positive(E, "A_m: E");
  const int am = std::abs(m);
  const double al = ppt_alpha(gamma);
  const double be = ppt_beta(gamma);
  const double nu = ppt_nu(E, omega, gamma);
  const double k0 = std::ceil(nu) - nu;
  auto term = [&](double k) { return std::exp(-al * k) * w_m(am, std::sqrt(be * k)); };

  double sum = 0.0;
  bool done = false;
  const double past_peak = 2.0 * am + 4.0;
  for (int j = 0; j < opts.max_terms; ++j) {
    const double k = k0 + j;
    const double t = term(k);
    sum += t;
    if (be * k > past_peak && t < opts.term_tolerance * sum) {
      // remaining terms fall off geometrically at the last observed ratio
      const double r = t / term(k - 1.0);
      if (r < 1.0) sum += t * r / (1.0 - r);
      done = true;
      break;
    }
  }
  if (!done) {
    // Euler-Maclaurin remainder from kJ: int f + f/2 - f'/12 + f'''/720
    const double kJ = k0 + opts.max_terms;
    const double fJ = term(kJ);
    auto shifted = [&](double u) { return term(kJ + u / al); };
    std::vector<double> edges{0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    const double integral = quad::gauss_kronrod_panels(shifted, edges, 1e-13).value / al;
    const double h = 1e-2 * std::min(kJ, 1.0 / al);
    const double f1 = (term(kJ + h) - term(kJ - h)) / (2.0 * h);
    const double f3 = (term(kJ + 2 * h) - 2 * term(kJ + h) + 2 * term(kJ - h) - term(kJ - 2 * h)) /
                      (2.0 * h * h * h);
    sum += integral + 0.5 * fJ - f1 / 12.0 + f3 / 720.0;
  }
  const double pref = 4.0 / std::sqrt(3.0 * units::kPi) / factorial(am) * gamma * gamma /
                      (1.0 + gamma * gamma);
  return pref * sum;
}

PptFunctions::PptFunctions(double gamma_K)
    : gamma_(gamma_K), g_(g_of_gamma(gamma_K)), h_(h_of_gamma(gamma_K)) {}

double factorial(int n) {
  if (n < 0) throw DomainError("factorial: negative argument");
  static const auto table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (int k = 1; k < 171; ++k) t[k] = t[k - 1] * k;
    return t;
  }();
  if (n > 170) return kInf;
  return table[n];
}

double Q_factor(int l, int m) {
  const int am = std::abs(m);
  if (l < 0 || am > l) throw DomainError("Q_factor: need |m| <= l");
  const double sign = ((m + am) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::sqrt((2.0 * l + 1.0) / 2.0 * factorial(l + am) / factorial(l - am));
}

double wigner_small_d(int l, int m, int mp, double beta) {
  if (l < 0 || std::abs(m) > l || std::abs(mp) > l) throw DomainError("wigner_small_d: bad indices");
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  double sum = 0.0;
  for (int k = std::max(0, mp - m); k <= std::min(l + mp, l - m); ++k) {
    const double sign = (m - mp + k) % 2 == 0 ? 1.0 : -1.0;
    const int pc = 2 * l + mp - m - 2 * k;
    const int ps = m - mp + 2 * k;
    sum += sign * std::pow(c, pc) * std::pow(s, ps) /
           (factorial(l + mp - k) * factorial(k) * factorial(m - mp + k) * factorial(l - m - k));
  }
  return std::sqrt(factorial(l + m) * factorial(l - m) * factorial(l + mp) * factorial(l - mp)) *
         sum;
}

Eigen::MatrixXcd wigner_D(int l, const EulerAngles& e) {
  if (l < 0) throw DomainError("wigner_D: l must be >= 0");
  const int n = 2 * l + 1;
  Eigen::MatrixXcd D(n, n);
  for (int m = -l; m <= l; ++m)
    for (int mp = -l; mp <= l; ++mp)
      D(m + l, mp + l) = std::polar(1.0, -m * e.alpha - mp * e.gamma) *
                         wigner_small_d(l, m, mp, e.beta);
  return D;
}

Eigen::Matrix3d rotation_matrix(const EulerAngles& e) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(e.alpha, Vector3d::UnitZ()) * AngleAxisd(e.beta, Vector3d::UnitY()) *
          AngleAxisd(e.gamma, Vector3d::UnitZ()))
      .toRotationMatrix();
}

WignerRotation::WignerRotation(const EulerAngles& euler, int max_l) : euler_(euler), max_l_(max_l) {
  if (max_l < 0) throw DomainError("WignerRotation: max_l must be >= 0");
  D_.reserve(max_l + 1);
  for (int l = 0; l <= max_l; ++l) D_.push_back(wigner_D(l, euler));
}

std::complex<double> WignerRotation::element(int l, int m, int mp) const {
  return D_.at(l)(m + l, mp + l);
}

}  // namespace dmsfi::specialfn

#include "dmsfi/rates.hpp"

#include "dmsfi/quadrature.hpp"
#include "dmsfi/specialfn.hpp"
#include "dmsfi/units.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmsfi {

using units::kE;
using units::kPi;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

RateKind parse_rate_kind(const std::string& s) {
  if (s == "na" || s == "nonadiabatic") return RateKind::Nonadiabatic;
  if (s == "adk") return RateKind::Adk;
  throw std::invalid_argument("unknown rate kind '" + s + "' (nonadiabatic, adk)");
}

std::string to_string(RateKind k) { return k == RateKind::Adk ? "adk" : "nonadiabatic"; }

std::vector<double> tabulate_log_A(double omega, double E, int m, const std::vector<double>& gammas,
                                   bool parallel) {
  std::vector<double> out(gammas.size());
  const long n = static_cast<long>(gammas.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < n; ++k) out[k] = std::log(specialfn::A_m(omega, gammas[k], E, m));
  } else {
    for (long k = 0; k < n; ++k) out[k] = std::log(specialfn::A_m(omega, gammas[k], E, m));
  }
  return out;
}

ChannelRate::ChannelRate(double E, double Z, const LaserField& field, RateKind kind,
                         const RateOptions& opt)
    : E_(E), Z_(Z), kappa_(std::sqrt(2.0 * E)), field_(field), kind_(kind), opt_(opt) {
  if (!(E > 0.0)) throw std::invalid_argument("ChannelRate: E must be > 0");
  if (kind_ != RateKind::Nonadiabatic || !opt_.tabulate || field_.F0() <= 0.0) return;
  const double g_peak = field_.omega() * kappa_ / field_.F0();
  lng_lo_ = std::log(g_peak);
  std::size_t n = 1;
  if (field_.envelope_kind() != EnvelopeKind::Cw) {
    const double range = std::log(std::max(field_.F0() / kFieldFloor, 1.0));
    n = static_cast<std::size_t>(std::ceil(range / opt_.table_step)) + 2;
  }
  std::vector<double> gam(n);
  for (std::size_t k = 0; k < n; ++k) gam[k] = std::exp(lng_lo_ + k * opt_.table_step);
  gam[0] = g_peak;
  table_ = tabulate_log_A(field_.omega(), E_, opt_.m, gam, true);
}

double ChannelRate::log_A(double amp) const {
  const double gamma = field_.omega() * kappa_ / amp;
  if (!table_.empty()) {
    const double u = (std::log(gamma) - lng_lo_) / opt_.table_step;
    if (u <= 0.0 && u > -1e-9) return table_[0];
    if (u > 0.0 && u < static_cast<double>(table_.size() - 1)) {
      const auto k = static_cast<std::size_t>(u);
      const double a = u - k;
      return (1.0 - a) * table_[k] + a * table_[k + 1];
    }
  }
  return std::log(specialfn::A_m(field_.omega(), gamma, E_, opt_.m));
}

double ChannelRate::log_prefactor(double amp) const {
  const int am = std::abs(opt_.m);
  const double k = kappa_, k3 = k * k * k;
  const double zk = 2.0 * Z_ / k;
  const double gamma = field_.omega() * k / amp;
  const double s = std::sqrt(1.0 + gamma * gamma);
  double lp = -(zk - 1.0) * std::log(k) + 0.5 * std::log(2.0 * specialfn::h_of_gamma(gamma) * s) +
              log_A(amp) + (am + 1) * std::log(amp * s / (2.0 * k3)) + zk * std::log(2.0 * k3 / amp);
  if (opt_.coulomb_factor) lp -= zk * std::log1p(2.0 * gamma / kE);
  lp -= am * std::log(2.0) + std::log(specialfn::factorial(am));
  return lp;
}

double ChannelRate::log_rate(double t) const {
  const double amp = field_.amplitude(t);
  const double ph = field_.phase(t);
  const double c = std::abs(std::cos(ph));
  if (!(amp * c >= kFieldFloor)) return kNegInf;
  const double k3 = kappa_ * kappa_ * kappa_;
  if (kind_ == RateKind::Adk) {
    const double F = amp * c;
    const double zk = 2.0 * Z_ / kappa_;
    return -(zk - 1.0) * std::log(kappa_) + (zk - 1.0) * std::log(2.0 * k3 / F) - 2.0 * k3 / (3.0 * F);
  }
  const double gamma = field_.omega() * kappa_ / amp;
  const double g = specialfn::g_phase(gamma, ph);
  return log_prefactor(amp) - 2.0 * k3 * g / (3.0 * amp);
}

double ChannelRate::operator()(double t) const {
  const double l = log_rate(t);
  return l == kNegInf ? 0.0 : std::exp(l);
}

double normalization_sq_unit(double E, double Z, double F0, double omega, int m,
                             bool coulomb_factor) {
  const int am = std::abs(m);
  const double k = std::sqrt(2.0 * E), k3 = k * k * k;
  const double zk = 2.0 * Z / k;
  const double gamma = omega * k / F0;
  const double s = std::sqrt(1.0 + gamma * gamma);
  const double g = specialfn::g_of_gamma(gamma), h = specialfn::h_of_gamma(gamma);
  double lc = -am * std::log(2.0) - std::log(specialfn::factorial(am)) - std::log(F0) -
              zk * std::log(k) + 0.5 * std::log(g * h / kPi) +
              std::log(specialfn::A_m(omega, gamma, E, m)) +
              (am + 0.5) * std::log(F0 * s / (2.0 * k3)) + zk * std::log(2.0 * k3 / F0);
  if (coulomb_factor) lc -= zk * std::log1p(2.0 * gamma / kE);
  return std::exp(lc);
}

std::vector<std::string> validity_warnings(const Channel& ch, const LaserField& field) {
  std::vector<std::string> w;
  const double k = ch.kappa();
  const double r1 = field.F0() / (k * k * k);
  const double r2 = field.omega() / ch.E;
  if (r1 > 0.3)
    w.push_back("channel " + ch.label + ": F0/kappa^3 = " + std::to_string(r1) +
                " exceeds 0.3, tunneling rate outside its validity range");
  if (r2 > 0.3)
    w.push_back("channel " + ch.label + ": omega/E = " + std::to_string(r2) +
                " exceeds 0.3, tunneling rate outside its validity range");
  return w;
}

double normalization_sq(const Channel& ch, const EulerAngles& euler, const LaserField& field,
                        int field_sign, int m, std::vector<std::string>* warnings) {
  if (warnings) {
    auto w = validity_warnings(ch, field);
    warnings->insert(warnings->end(), w.begin(), w.end());
  }
  const double b2 = std::norm(rotate_Bm(ch, euler, field_sign, m));
  return b2 * normalization_sq_unit(ch.E, ch.Z, field.F0(), field.omega(), m);
}

namespace {
int sign_of(double v) { return v >= 0.0 ? 1 : -1; }
}  // namespace

double subcycle_rate(const Channel& ch, const EulerAngles& euler, const LaserField& field, double t,
                     const RateOptions& opt) {
  const ChannelRate r(ch.E, ch.Z, field, RateKind::Nonadiabatic, opt);
  const double b2 = std::norm(rotate_Bm(ch, euler, sign_of(field.field_at(t)), opt.m));
  return b2 * r(t);
}

double adk_rate(const Channel& ch, const EulerAngles& euler, const LaserField& field, double t) {
  const ChannelRate r(ch.E, ch.Z, field, RateKind::Adk);
  const double b2 = std::norm(rotate_Bm(ch, euler, sign_of(field.field_at(t))));
  return b2 * r(t);
}

double cycle_averaged_rate(const Channel& ch, const EulerAngles& euler, const LaserField& field,
                           const RateOptions& opt) {
  const double b2 = 0.5 * (std::norm(rotate_Bm(ch, euler, 1, opt.m)) +
                           std::norm(rotate_Bm(ch, euler, -1, opt.m)));
  const double F0 = field.F0();
  const double k = ch.kappa(), k3 = k * k * k;
  const double gamma = field.omega() * k / F0;
  const double g = specialfn::g_of_gamma(gamma), h = specialfn::h_of_gamma(gamma);
  const double c0 =
      b2 * normalization_sq_unit(ch.E, ch.Z, F0, field.omega(), opt.m, opt.coulomb_factor);
  return c0 * F0 * F0 / (k * k) * std::sqrt(3.0 * (1.0 + gamma * gamma) / (2.0 * g * h)) *
         std::exp(-2.0 * k3 * g / (3.0 * F0));
}

double half_cycle_average(const ChannelRate& rate, double b2) {
  const auto& f = rate.field();
  const double w = f.omega();
  const double a = (-kPi / 2 - f.cep()) / w, b = (kPi / 2 - f.cep()) / w;
  auto fn = [&](double t) { return rate(t); };
  const double c = -f.cep() / w;
  const auto r = quad::gauss_kronrod_panels(fn, {a, c, b}, 1e-10);
  return w / kPi * b2 * r.value;
}

double integrated_rate(const ChannelRate& rate, const Channel& ch, const EulerAngles& euler) {
  const auto& f = rate.field();
  const int lmax = ch.max_l();
  const specialfn::WignerRotation rot(euler, lmax);
  const double bp = std::norm(rotate_Bm(ch, rot, 1, rate.options().m));
  const double bm = std::norm(rotate_Bm(ch, rot, -1, rate.options().m));
  auto fn = [&](double t) {
    const double w = rate(t);
    if (w == 0.0) return 0.0;
    return (f.field_at(t) >= 0.0 ? bp : bm) * w;
  };
  // panels between consecutive field zeros so each holds one burst
  std::vector<double> edges{f.t_start()};
  const double w = f.omega();
  const double kstart = std::ceil((w * f.t_start() + f.cep() - kPi / 2) / kPi);
  for (double k = kstart;; k += 1.0) {
    const double tz = (kPi / 2 + k * kPi - f.cep()) / w;
    if (tz >= f.t_end()) break;
    if (tz > edges.back()) edges.push_back(tz);
  }
  if (f.t_end() > edges.back()) edges.push_back(f.t_end());
  return quad::gauss_kronrod_panels(fn, edges, 1e-10).value;
}

double ionization_yield(const Channel& ch, const EulerAngles& euler, const LaserField& field,
                        RateKind kind, const RateOptions& opt) {
  const ChannelRate r(ch.E, ch.Z, field, kind, opt);
  return -std::expm1(-integrated_rate(r, ch, euler));
}

}  // namespace dmsfi

#pragma once

#include "dmsfi/channels.hpp"
#include "dmsfi/laser.hpp"

#include <string>
#include <vector>

namespace dmsfi {

enum class RateKind { Nonadiabatic, Adk };

RateKind parse_rate_kind(const std::string& s);
std::string to_string(RateKind k);

struct RateOptions {
  /// Keep the (1 + 2 gamma_K / e)^(-2Z/kappa) factor.
  bool coulomb_factor = true;
  /// Interpolate log A_m on a ln(gamma) grid instead of summing per call.
  bool tabulate = true;
  double table_step = 0.005;
  int m = 0;
};

/// Ionization rate of one channel per unit |B_m|^2. The nonadiabatic rate
/// takes its prefactor at the local amplitude F0 f(t) and the carrier phase
/// only through g(t); the ADK rate uses |F(t)|. Both are exactly 0 where
/// F0 f(t) |cos(omega t + cep)| < kFieldFloor.
class ChannelRate {
 public:
  ChannelRate(double E, double Z, const LaserField& field, RateKind kind,
              const RateOptions& opt = {});

  double operator()(double t) const;
  /// log of the rate; -inf where it vanishes.
  double log_rate(double t) const;

  /// Nonadiabatic prefactor (everything except |B|^2 and the exponential) at
  /// local amplitude amp, in log form.
  double log_prefactor(double amp) const;
  /// log A_m at local amplitude amp (table lookup when enabled).
  double log_A(double amp) const;

  double E() const { return E_; }
  double Z() const { return Z_; }
  double kappa() const { return kappa_; }
  RateKind kind() const { return kind_; }
  const LaserField& field() const { return field_; }
  const RateOptions& options() const { return opt_; }
  std::size_t table_size() const { return table_.size(); }

 private:
  double E_, Z_, kappa_;
  LaserField field_;
  RateKind kind_;
  RateOptions opt_;
  double lng_lo_ = 0.0;         // ln gamma at the first node (peak amplitude)
  std::vector<double> table_;   // log A_m on ln gamma = lng_lo + k * step
};

/// log A_m at each gamma; the OpenMP and serial paths give identical values.
std::vector<double> tabulate_log_A(double omega, double E, int m, const std::vector<double>& gammas,
                                   bool parallel);

/// |C(t=0)|^2 per unit |B_m|^2 at amplitude F0.
double normalization_sq_unit(double E, double Z, double F0, double omega, int m = 0,
                             bool coulomb_factor = true);

/// |C(t=0)|^2 for a channel at a given orientation and field sign. Appends
/// validity warnings (F0/kappa^3 or omega/E above 0.3) when a sink is given.
double normalization_sq(const Channel& ch, const EulerAngles& euler, const LaserField& field,
                        int field_sign = 1, int m = 0, std::vector<std::string>* warnings = nullptr);

std::vector<std::string> validity_warnings(const Channel& ch, const LaserField& field);

/// |B_0(sign F(t))|^2 times the unit rate.
double subcycle_rate(const Channel& ch, const EulerAngles& euler, const LaserField& field, double t,
                     const RateOptions& opt = {.tabulate = false});
double adk_rate(const Channel& ch, const EulerAngles& euler, const LaserField& field, double t);

/// Saddle-point cycle average |C0|^2 (F0/kappa)^2 sqrt(3(1+g^2)/(2 g h)) exp(-2 kappa^3 g / 3F0),
/// with |B_0|^2 averaged over the two field signs.
double cycle_averaged_rate(const Channel& ch, const EulerAngles& euler, const LaserField& field,
                           const RateOptions& opt = {});

/// (omega/pi) * integral of the subcycle rate over the half cycle around t = 0.
double half_cycle_average(const ChannelRate& rate, double b2 = 1.0);

/// integral of w dt over the pulse window, panel edges at the field zeros.
double integrated_rate(const ChannelRate& rate, const Channel& ch, const EulerAngles& euler);

/// P = 1 - exp(-integral of w dt).
double ionization_yield(const Channel& ch, const EulerAngles& euler, const LaserField& field,
                        RateKind kind, const RateOptions& opt = {});

}  // namespace dmsfi

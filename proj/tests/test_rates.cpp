#include "dmsfi/rates.hpp"
#include "dmsfi/specialfn.hpp"
#include "dmsfi/units.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dmsfi;

namespace {

const EulerAngles kAligned{};

LaserField make(double I, double nm, EnvelopeKind env = EnvelopeKind::Cw, double fwhm = 0.0) {
  LaserParams p;
  p.intensity_W_cm2 = I;
  p.wavelength_nm = nm;
  p.envelope = env;
  p.fwhm_fs = fwhm;
  return LaserField(p);
}

// wavelength with Keldysh parameter gamma for a channel of the given kappa
LaserField with_gamma(double I, double kappa, double gamma) {
  return make(I, units::kOmegaNm * kappa / (gamma * units::intensity_to_field(I)));
}

const Channel& hydrogen() {
  static const auto h = load_molecule("h");
  return h.channel(0);
}

}  // namespace

TEST_SUITE("rates") {

TEST_CASE("ADK rate closed form for hydrogen") {
  const double F = 0.0534;
  const auto f = make(F * F * units::kIntensityAu, 800);
  const double expect = 2.0 * (2.0 / F) * std::exp(-2.0 / (3.0 * F));
  CHECK(adk_rate(hydrogen(), kAligned, f, 0.0) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(adk_rate(hydrogen(), kAligned, f, 0.25 * f.period()) == 0.0);
}

TEST_CASE("peak rate assembled from the normalization constant") {
  const auto n2 = load_molecule("n2").with_theta(0.6);
  for (const auto* f : {new LaserField(make(1e14, 800)), new LaserField(make(2e14, 900)),
                        new LaserField(make(1e14, 1600))}) {
    for (std::size_t i = 0; i < n2.size(); ++i) {
      const auto& ch = n2.channel(i);
      if (std::abs(n2.b0(1)[i]) < 1e-3) continue;
      const double k = ch.kappa(), F0 = f->F0();
      const double gamma = f->keldysh(k), g = specialfn::g_of_gamma(gamma);
      const double c2 = normalization_sq(ch, n2.orientation(), *f, 1);
      const double expect = c2 * std::sqrt(units::kPi * F0 / (k * g)) * F0 * std::sqrt(1 + gamma * gamma) *
                            std::exp(-2 * k * k * k * g / (3 * F0));
      CHECK(subcycle_rate(ch, n2.orientation(), *f, 0.0) == doctest::Approx(expect).epsilon(1e-12));
    }
    delete f;
  }
}

TEST_CASE("normalization scales with the squared structure amplitude") {
  const auto n2 = load_molecule("n2");
  const auto f = make(2e14, 900);
  for (double th : {0.2, 0.9}) {
    const auto m = n2.with_theta(th);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto& ch = m.channel(i);
      CHECK(normalization_sq(ch, m.orientation(), f, 1) ==
            doctest::Approx(std::norm(m.b0(1)[i]) * normalization_sq_unit(ch.E, ch.Z, f.F0(), f.omega()))
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("quasistatic limit reduces to ADK at every phase") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ph(-1.55, 1.55);
  for (double gamma : {0.05, 0.01, 1e-3}) {
    const auto f = with_gamma(1e14, 1.0, gamma);
    const ChannelRate na(0.5, 1.0, f, RateKind::Nonadiabatic), adk(0.5, 1.0, f, RateKind::Adk);
    for (int k = 0; k < 200; ++k) {
      const double t = ph(rng) / f.omega();
      if (f.F0() * std::abs(std::cos(f.phase(t))) < kFieldFloor) continue;
      // log space: both rates underflow near the field zeros
      const double r = std::exp(na.log_rate(t) - adk.log_rate(t));
      CHECK(std::abs(r - 1.0) <= 0.1);
    }
  }
  const auto f = with_gamma(1e14, 1.0, 1e-3);
  const double r0 = subcycle_rate(hydrogen(), kAligned, f, 0.0) / adk_rate(hydrogen(), kAligned, f, 0.0);
  CHECK(r0 >= 0.95);
  CHECK(r0 <= 1.05);
}

TEST_CASE("quasistatic ratio follows the carrier as |cos|^(2Z/kappa-1)") {
  // the prefactor sits at the envelope amplitude while ADK sees |F(t)|
  const auto f = with_gamma(1e14, 1.0, 1e-3);
  for (double x : {0.0, 0.5, 1.0, 1.2, 1.4}) {
    const ChannelRate na(0.5, 1.0, f, RateKind::Nonadiabatic), adk(0.5, 1.0, f, RateKind::Adk);
    const double t = x / f.omega();
    const double r = std::exp(na.log_rate(t) - adk.log_rate(t));
    CHECK(r / std::abs(std::cos(x)) == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("subcycle rate: sign, symmetry and zeros") {
  const auto f = make(1e14, 800);
  const auto n2 = load_molecule("n2").with_theta(0.7);
  for (double x = 0.0; x < 1.6; x += 0.05) {
    const double t = x / f.omega();
    for (std::size_t i = 0; i < n2.size(); ++i) {
      const double a = subcycle_rate(n2.channel(i), n2.orientation(), f, t);
      const double b = subcycle_rate(n2.channel(i), n2.orientation(), f, -t);
      CHECK(a >= 0.0);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
  const double quarter = 0.25 * f.period();
  CHECK(subcycle_rate(hydrogen(), kAligned, f, quarter) == 0.0);
  CHECK(subcycle_rate(hydrogen(), kAligned, f, quarter * (1 - 1e-3)) < 1e-100);
}

TEST_CASE("log-space evaluation stays finite across intensities") {
  for (double I : {1e12, 1e13, 1e14, 1e15}) {
    const auto f = make(I, 800);
    for (double x : {0.0, 0.7, 1.5}) {
      const double w = subcycle_rate(hydrogen(), kAligned, f, x / f.omega());
      CHECK(std::isfinite(w));
      CHECK(w >= 0.0);
    }
    const ChannelRate r(0.5, 1.0, f, RateKind::Nonadiabatic);
    CHECK(std::isfinite(r.log_rate(0.0)));
  }
}

TEST_CASE("cycle-averaged rate agrees with the averaged subcycle rate") {
  const auto n2 = load_molecule("n2").with_theta(0.5);
  for (double nm : {800.0, 1600.0}) {
    const auto f = make(1e14, nm);
    const ChannelRate r(0.5, 1.0, f, RateKind::Nonadiabatic, {.tabulate = false});
    const double avg = half_cycle_average(r, 2.0);
    CHECK(f.keldysh(1.0) <= 1.1);
    CHECK(avg == doctest::Approx(cycle_averaged_rate(hydrogen(), kAligned, f)).epsilon(0.10));
  }
  const auto f = make(2e14, 900);
  for (std::size_t i = 0; i < n2.size(); ++i) {
    const auto& ch = n2.channel(i);
    const ChannelRate r(ch.E, ch.Z, f, RateKind::Nonadiabatic, {.tabulate = false});
    const double b2 = 0.5 * (std::norm(n2.b0(1)[i]) + std::norm(n2.b0(-1)[i]));
    CHECK(half_cycle_average(r, b2) ==
          doctest::Approx(cycle_averaged_rate(ch, n2.orientation(), f)).epsilon(0.10));
  }
}

TEST_CASE("Coulomb correction factor matters at 1600 nm") {
  const auto f = make(1e14, 1600, EnvelopeKind::CosineSquare, 10.0);
  RateOptions no;
  no.coulomb_factor = false;
  const double with = ionization_yield(hydrogen(), kAligned, f, RateKind::Nonadiabatic);
  const double without = ionization_yield(hydrogen(), kAligned, f, RateKind::Nonadiabatic, no);
  CHECK(std::abs(without / with - 1.0) > 0.1);
  const auto c = make(1e14, 1600);
  RateOptions no_cw = no;
  CHECK(cycle_averaged_rate(hydrogen(), kAligned, c, no_cw) / cycle_averaged_rate(hydrogen(), kAligned, c) ==
        doctest::Approx(std::pow(1.0 + 2.0 * c.keldysh(1.0) / units::kE, 2.0)).epsilon(1e-12));
}

TEST_CASE("yield limits") {
  const auto zero = make(0.0, 800, EnvelopeKind::CosineSquare, 10.0);
  CHECK(ionization_yield(hydrogen(), kAligned, zero, RateKind::Nonadiabatic) == 0.0);
  CHECK(ionization_yield(hydrogen(), kAligned, zero, RateKind::Adk) == 0.0);
  const auto huge = make(1e16, 800, EnvelopeKind::CosineSquare, 10.0);
  CHECK(ionization_yield(hydrogen(), kAligned, huge, RateKind::Adk) == doctest::Approx(1.0).epsilon(1e-12));
  for (double I : {3e13, 1e14, 3e14}) {
    const auto f = make(I, 800, EnvelopeKind::CosineSquare, 10.0);
    const double p = ionization_yield(hydrogen(), kAligned, f, RateKind::Nonadiabatic);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
}

TEST_CASE("ADK overtakes the nonadiabatic yield as intensity grows") {
  double prev = 0.0;
  for (double I : {5e13, 1e14, 2e14, 4e14}) {
    const auto f = make(I, 800, EnvelopeKind::CosineSquare, 10.0);
    // compare integrated rates so saturation does not mask the trend
    const double na = -std::log1p(-ionization_yield(hydrogen(), kAligned, f, RateKind::Nonadiabatic));
    const double adk = -std::log1p(-ionization_yield(hydrogen(), kAligned, f, RateKind::Adk));
    CHECK(adk / na > prev);
    prev = adk / na;
  }
  CHECK(prev > 1.0);
}

TEST_CASE("tabulated photon sum matches direct evaluation along a pulse") {
  const auto f = make(2e14, 900, EnvelopeKind::Gaussian, 3.7);
  const ChannelRate tab(units::ev_to_au(15.6), 1.0, f, RateKind::Nonadiabatic);
  const ChannelRate direct(units::ev_to_au(15.6), 1.0, f, RateKind::Nonadiabatic, {.tabulate = false});
  CHECK(tab.table_size() > 100);
  for (double t = f.t_start(); t < f.t_end(); t += 1.37) {
    const double a = tab(t), b = direct(t);
    if (b == 0.0) {
      CHECK(a == 0.0);
      continue;
    }
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }
}

TEST_CASE("photon-sum table: serial and parallel paths agree bitwise") {
  std::vector<double> g;
  for (int k = 0; k < 400; ++k) g.push_back(0.5 * std::exp(0.01 * k));
  const auto a = tabulate_log_A(0.05, 0.6, 0, g, false);
  const auto b = tabulate_log_A(0.05, 0.6, 0, g, true);
  CHECK(a == b);
}

TEST_CASE("validity warnings") {
  CHECK(validity_warnings(hydrogen(), make(1e14, 800)).empty());
  CHECK(!validity_warnings(hydrogen(), make(1e16, 800)).empty());
  std::vector<std::string> w;
  normalization_sq(hydrogen(), kAligned, make(1e16, 800), 1, 0, &w);
  CHECK(w.size() == 1);
}

TEST_CASE("rate kind parsing") {
  CHECK(parse_rate_kind("na") == RateKind::Nonadiabatic);
  CHECK(parse_rate_kind(to_string(RateKind::Adk)) == RateKind::Adk);
  CHECK_THROWS(parse_rate_kind("ppt"));
}

}  // TEST_SUITE

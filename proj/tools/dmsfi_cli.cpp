// Command-line front end: rates, yields, kinematics, propagation, sweeps and
// oracle verification. Tables go to stdout unless --out-dir is given.

#include "dmsfi/dmsfi.hpp"
#include "dmsfi/kinematics.hpp"
#include "dmsfi/rates.hpp"
#include "dmsfi/scenario.hpp"
#include "dmsfi/units.hpp"
#include "dmsfi/wforacle.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dmsfi;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out_dir;
  int threads = 0;
  std::string variant;
  std::string rate;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit(const Common& c, const std::string& name, const std::string& text) {
  if (c.out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(c.out_dir);
  std::ofstream(fs::path(c.out_dir) / name) << text;
  std::cerr << "wrote " << (fs::path(c.out_dir) / name).string() << "\n";
}

const Channel& pick_channel(const MoleculeModel& m, const std::string& label) {
  return label.empty() ? m.channel(0) : m.channel(m.index_of(label));
}

scenario::Scenario scenario_with_overrides(const Common& c) {
  if (c.config.empty()) throw CLI::ValidationError("--config", "a scenario file is required");
  auto s = scenario::load_scenario(c.config);
  if (!c.variant.empty()) s.variants = {parse_variant(c.variant)};
  if (!c.rate.empty()) s.rates = {parse_rate_kind(c.rate)};
  return s;
}

void print_table_summary(const scenario::Bundle& b) {
  int bad = 0;
  for (const auto& r : b.runs)
    if (!r.ok) {
      ++bad;
      std::cerr << "run " << r.spec.id << " failed: " << r.error << "\n";
    }
  std::cerr << b.runs.size() - bad << "/" << b.runs.size() << " runs ok; outputs in " << b.out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subcycle strong-field ionization rates and ionic density-matrix propagation"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config, "scenario JSON file");
  app.add_option("--out-dir", common.out_dir, "output directory (default: stdout for tables)");
  app.add_option("--threads", common.threads, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--variant", common.variant, "override model variant: TIC1, TIC0, TIC1-D0");
  app.add_option("--rate", common.rate, "override rate model: nonadiabatic, adk");

  // rate
  std::string molecule = "h", channel_label;
  double wavelength = 800.0, intensity = 1e14, theta_deg = 0.0, cep = 0.0;
  int points = 401;
  auto* rate = app.add_subcommand("rate", "subcycle rates over one cw cycle: t_au,F,w_na,w_adk");
  rate->add_option("--molecule", molecule, "bundled molecule or JSON path");
  rate->add_option("--channel", channel_label, "channel label (default: first)");
  rate->add_option("--wavelength-nm", wavelength);
  rate->add_option("--intensity", intensity, "W/cm^2");
  rate->add_option("--theta-deg", theta_deg);
  rate->add_option("--cep-rad", cep);
  rate->add_option("--points", points)->check(CLI::PositiveNumber);

  // yield
  double fwhm = 10.0;
  std::string envelope = "cosine-square";
  std::vector<double> intensities;
  double imin = 5e13, imax = 5e14;
  int count = 10;
  auto* yld = app.add_subcommand("yield", "pulse yields vs intensity: intensity,P_na,P_adk");
  yld->add_option("--molecule", molecule);
  yld->add_option("--channel", channel_label);
  yld->add_option("--wavelength-nm", wavelength);
  yld->add_option("--fwhm-fs", fwhm);
  yld->add_option("--envelope", envelope);
  yld->add_option("--theta-deg", theta_deg);
  yld->add_option("--intensities", intensities, "explicit list (W/cm^2)");
  yld->add_option("--imin", imin);
  yld->add_option("--imax", imax);
  yld->add_option("--count", count)->check(CLI::PositiveNumber);

  // kinematics
  double e1 = 12.0, e2 = 15.3, p_perp = 0.0;
  auto* kin = app.add_subcommand("kinematics",
                                 "birth-time kinematics of two channels sharing p_z: "
                                 "t_au,p_z,tau,re_S1,re_S2,im_S1,im_S2,delay_ratio");
  kin->add_option("--e1-ev", e1);
  kin->add_option("--e2-ev", e2);
  kin->add_option("--wavelength-nm", wavelength);
  kin->add_option("--intensity", intensity);
  kin->add_option("--p-perp", p_perp);
  kin->add_option("--points", points)->check(CLI::PositiveNumber);

  auto* prop = app.add_subcommand("propagate", "run a scenario (time series + summary)");
  auto* scan = app.add_subcommand("scan", "run a scenario sweep and print the aggregated table");
  std::vector<int> ppc{40, 80, 160, 320};
  auto* ver = app.add_subcommand("verify", "compare propagation with the wave-packet reconstruction");
  ver->add_option("--points-per-cycle", ppc, "birth grids to test");
  auto* mols = app.add_subcommand("molecules", "list bundled molecules");

  for (auto* sc : {prop, scan, ver}) {
    sc->add_option("--config", common.config);
    sc->add_option("--out-dir", common.out_dir);
    sc->add_option("--threads", common.threads);
    sc->add_option("--variant", common.variant);
    sc->add_option("--rate", common.rate);
  }
  for (auto* sc : {rate, yld, kin, mols}) sc->add_option("--out-dir", common.out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (common.threads > 0) omp_set_num_threads(common.threads);

    if (*mols) {
      std::ostringstream os;
      for (const auto& name : bundled_molecules()) {
        const auto m = load_molecule(name);
        os << name << " (" << m.name() << ")\n";
        for (const auto& c : m.channels())
          os << "  " << c.label << "  E = " << num(units::au_to_ev(c.E)) << " eV  parity "
             << (c.parity > 0 ? "g" : "u") << (c.partner ? "  partner " + *c.partner : "") << "\n";
        for (const auto& d : m.dipoles())
          os << "  d(" << m.channel(d.i).label << "," << m.channel(d.j).label << ") = ("
             << num(d.d[0].real()) << ", " << num(d.d[1].real()) << ", " << num(d.d[2].real()) << ")\n";
      }
      emit(common, "molecules.txt", os.str());
    } else if (*rate) {
      const auto m = load_molecule(molecule).with_theta(theta_deg * units::kPi / 180);
      const auto& ch = pick_channel(m, channel_label);
      LaserParams lp;
      lp.wavelength_nm = wavelength;
      lp.intensity_W_cm2 = intensity;
      lp.cep_rad = cep;
      const LaserField f(lp);
      for (const auto& w : validity_warnings(ch, f)) std::cerr << "warning: " << w << "\n";
      std::ostringstream os;
      os << "t_au,F,w_na,w_adk\n";
      for (int k = 0; k < points; ++k) {
        const double t = f.t_start() + (f.t_end() - f.t_start()) * k / std::max(1, points - 1);
        os << num(t) << "," << num(f.field_at(t)) << "," << num(subcycle_rate(ch, m.orientation(), f, t))
           << "," << num(adk_rate(ch, m.orientation(), f, t)) << "\n";
      }
      emit(common, "rate.csv", os.str());
    } else if (*yld) {
      const auto m = load_molecule(molecule).with_theta(theta_deg * units::kPi / 180);
      const auto& ch = pick_channel(m, channel_label);
      if (intensities.empty())
        for (int k = 0; k < count; ++k)
          intensities.push_back(count == 1 ? imin : imin * std::pow(imax / imin, double(k) / (count - 1)));
      std::vector<std::array<double, 2>> rows(intensities.size());
      const long n = static_cast<long>(intensities.size());
#pragma omp parallel for schedule(dynamic, 1)
      for (long k = 0; k < n; ++k) {
        LaserParams lp;
        lp.wavelength_nm = wavelength;
        lp.intensity_W_cm2 = intensities[k];
        lp.fwhm_fs = fwhm;
        lp.envelope = parse_envelope(envelope);
        const LaserField f(lp);
        rows[k] = {ionization_yield(ch, m.orientation(), f, RateKind::Nonadiabatic),
                   ionization_yield(ch, m.orientation(), f, RateKind::Adk)};
      }
      std::ostringstream os;
      os << "intensity,P_na,P_adk\n";
      for (long k = 0; k < n; ++k) os << num(intensities[k]) << "," << num(rows[k][0]) << "," << num(rows[k][1]) << "\n";
      emit(common, "yield.csv", os.str());
    } else if (*kin) {
      LaserParams lp;
      lp.wavelength_nm = wavelength;
      lp.intensity_W_cm2 = intensity;
      const LaserField f(lp);
      const double E1 = units::ev_to_au(e1), E2 = units::ev_to_au(e2);
      const double t_final = units::kPi / (2 * f.omega());
      std::ostringstream os;
      os << "t_au,omega_t,p_z,tau,re_S1,re_S2,im_S1,im_S2,delay_ratio\n";
      for (int k = 0; k < points; ++k) {
        // open half-cycle, endpoints excluded
        const double x = -units::kPi / 2 + units::kPi * (k + 1) / (points + 1);
        const double t = x / f.omega();
        const auto s1 = kinematics::saddle(f, std::sqrt(2 * E1), p_perp, t);
        const auto d = kinematics::birth_delay(f, E1, E2, p_perp, t);
        const double re1 = kinematics::action_real(f, E1, p_perp, s1.p_z, t_final, t);
        const double re2 = kinematics::action_real(f, E2, p_perp, s1.p_z, t_final, d.t2);
        const double im1 = kinematics::action_imag(f, E1, p_perp, t);
        const double im2 = kinematics::action_imag(f, E2, p_perp, d.t2);
        os << num(t) << "," << num(x) << "," << num(s1.p_z) << "," << num(s1.tau_tunnel) << "," << num(re1)
           << "," << num(re2) << "," << num(im1) << "," << num(im2) << "," << num(d.ratio) << "\n";
      }
      emit(common, "kinematics.csv", os.str());
    } else if (*prop || *scan) {
      const auto s = scenario_with_overrides(common);
      if (*scan && !s.sweep) std::cerr << "note: scenario has no sweep; running a single point set\n";
      const std::string out = common.out_dir.empty() ? "out/" + s.name : common.out_dir;
      const auto b = scenario::run_scenario(s, out, common.threads);
      print_table_summary(b);
      if (*scan) std::cout << scenario::summary_table_csv(s, b.runs);
      for (const auto& r : b.runs)
        if (!r.ok) return 2;
    } else if (*ver) {
      const auto s = scenario_with_overrides(common);
      const auto spec = scenario::expand(s).front();
      const auto mol = load_molecule(s.molecule).with_theta(spec.theta_deg * units::kPi / 180);
      const LaserField f(spec.laser);
      const IonizationModel model(mol, f, spec.options);
      const auto res = propagate(model);
      const auto rows = wforacle::convergence_table(model, res.rho.back(), ppc);
      const auto orders = wforacle::observed_orders(rows);
      std::ostringstream os;
      os << "points_per_cycle,trace_distance,observed_order\n";
      for (std::size_t k = 0; k < rows.size(); ++k)
        os << rows[k].points_per_cycle << "," << num(rows[k].trace_distance) << ","
           << (k > 0 ? num(orders[k - 1]) : std::string("")) << "\n";
      emit(common, "verify.csv", os.str());
      std::cerr << "run " << spec.id << ": finest trace distance " << num(rows.back().trace_distance) << "\n";
    }
  } catch (const scenario::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include "dmsfi/channels.hpp"
#include "dmsfi/laser.hpp"
#include "dmsfi/ode.hpp"
#include "dmsfi/rates.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace dmsfi {

enum class ModelVariant { TIC1, TIC0, TIC1_D0 };
/// Optional extra channel phase exp(i pi Z / kappa_i) on the ionization amplitude.
enum class PhaseConvention { Plain, CoulombPhase };
/// How the neutral population entering Gamma is obtained.
enum class NeutralPopulation { CoIntegrated, Interpolated };

ModelVariant parse_variant(const std::string& s);
std::string to_string(ModelVariant v);
PhaseConvention parse_phase_convention(const std::string& s);
std::string to_string(PhaseConvention p);

struct PropagationOptions {
  RateKind rate = RateKind::Nonadiabatic;
  ModelVariant variant = ModelVariant::TIC1;
  PhaseConvention phase = PhaseConvention::Plain;
  NeutralPopulation neutral = NeutralPopulation::CoIntegrated;
  RateOptions rate_options{.tabulate = false};
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step_fs = 0.1;
  double output_step_as = 10.0;
  /// Restart the integrator where the photon-threshold cusps of the
  /// nonadiabatic prefactor fall, down to this envelope value (1 disables).
  double threshold_envelope_min = 0.5;
  /// Per channel; above this many crossings none are used.
  int max_thresholds = 200;
};

struct IonDensityMatrix {
  Eigen::MatrixXcd rho;
  double rho0 = 1.0;
  double t = 0.0;

  static IonDensityMatrix initial(std::size_t n, double t0);
  double trace() const { return rho.trace().real(); }
  double hermiticity_error() const;
  Eigen::VectorXd populations() const { return rho.diagonal().real(); }
};

/// Everything the equation of motion needs at one orientation: per-channel
/// rates, field-sign dependent structure amplitudes and the dipole coupling.
class IonizationModel {
 public:
  IonizationModel(const MoleculeModel& molecule, const LaserField& field,
                  const PropagationOptions& opt = {});

  std::size_t size() const { return molecule_.size(); }
  const MoleculeModel& molecule() const { return molecule_; }
  const LaserField& field() const { return field_; }
  const PropagationOptions& options() const { return opt_; }

  /// w_i(t) including |B_i|^2.
  Eigen::VectorXd rates(double t) const;
  double total_rate(double t) const;
  /// u_i = (B_i/|B_i|) sqrt(w_i) [times the Coulomb phase]; Gamma = rho0 u u^H.
  Eigen::VectorXcd amplitudes(double t) const;
  Eigen::MatrixXcd gamma_matrix(double t, double rho0) const;
  /// Ionic Hamiltonian; dipoles dropped for TIC1-D0.
  Eigen::MatrixXcd hamiltonian(double t) const;

  /// State vector: column-major rho followed by rho0.
  void rhs(double t, const ode::Vec& y, ode::Vec& dydt) const;
  /// rho0 from the precomputed depletion curve (Interpolated mode).
  double neutral_population(double t) const;
  /// Times where a channel's prefactor has a photon-threshold cusp.
  const std::vector<double>& threshold_times() const { return thresholds_; }

 private:
  void build_depletion_table();
  void find_threshold_times();
  Eigen::MatrixXcd gamma_from_amplitudes(const Eigen::VectorXcd& u, double rho0) const;

  MoleculeModel molecule_;
  LaserField field_;
  PropagationOptions opt_;
  std::vector<std::shared_ptr<const ChannelRate>> unit_rates_;
  Eigen::VectorXcd b_pos_, b_neg_;
  Eigen::VectorXcd coulomb_;
  std::vector<bool> active_;
  // depletion L(t) = integral of total rate, Hermite-interpolated
  std::vector<double> dep_t_, dep_L_, dep_w_;
  std::vector<double> thresholds_;
};

struct CoherenceSummary {
  std::size_t i = 0, j = 0;
  double max_abs = 0.0;    // over the time grid
  double final_abs = 0.0;  // at the end of the pulse
};

struct SimulationSummary {
  Eigen::VectorXd final_populations;
  std::map<std::string, double> group_populations;  // Pi partners summed
  std::vector<CoherenceSummary> coherences;
  double yield = 0.0;  // 1 - rho0 at the end
  double max_hermiticity_error = 0.0;
  double max_trace_error = 0.0;  // |tr rho + rho0 - 1|
  double min_diagonal = 0.0;
  ode::Stats stats;
};

struct SimulationResult {
  std::vector<std::string> labels;
  std::vector<double> t;  // a.u.
  std::vector<double> field;
  std::vector<double> rho0;
  std::vector<Eigen::MatrixXcd> rho;
  SimulationSummary summary;

  IonDensityMatrix final_state() const;
  std::vector<double> population_series(std::size_t i) const;
  /// Sum over channels whose label starts with `group` followed by +/- or nothing.
  std::vector<double> group_series(const std::string& group) const;
};

/// Channel group name: the label with a trailing + or - removed.
std::string group_of(const std::string& label);

/// Default output grid: field window sampled every output_step_as.
std::vector<double> default_time_grid(const LaserField& field, double step_as);

/// Integrates the density-matrix equation of motion from rho = 0, rho0 = 1
/// at the first grid point.
SimulationResult propagate(const IonizationModel& model, const std::vector<double>& t_grid = {});
SimulationResult propagate(const MoleculeModel& molecule, const LaserField& field,
                           const PropagationOptions& opt, const std::vector<double>& t_grid = {});

/// Adaptive steps of the equation of motion without output sampling; used to
/// advance a state by hand.
class EomStepper {
 public:
  EomStepper(const IonizationModel& model, const IonDensityMatrix& start);
  IonDensityMatrix step(double t_limit);
  IonDensityMatrix state() const;
  const ode::Stats& stats() const { return solver_.stats(); }

 private:
  const IonizationModel& model_;
  ode::Dopri5 solver_;
};

/// omega / Delta for an energy gap Delta (eV) and wavelength (nm).
double adiabaticity_gamma_e(double delta_eV, double wavelength_nm);

ode::Vec pack_state(const IonDensityMatrix& s);
IonDensityMatrix unpack_state(const ode::Vec& y, std::size_t n, double t);

}  // namespace dmsfi

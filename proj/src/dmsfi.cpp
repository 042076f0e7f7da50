#include "dmsfi/dmsfi.hpp"

#include "dmsfi/quadrature.hpp"
#include "dmsfi/specialfn.hpp"
#include "dmsfi/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmsfi {

using cd = std::complex<double>;

ModelVariant parse_variant(const std::string& s) {
  if (s == "TIC1" || s == "tic1") return ModelVariant::TIC1;
  if (s == "TIC0" || s == "tic0") return ModelVariant::TIC0;
  if (s == "TIC1-D0" || s == "tic1-d0" || s == "TIC1_D0") return ModelVariant::TIC1_D0;
  throw std::invalid_argument("unknown variant '" + s + "' (TIC1, TIC0, TIC1-D0)");
}

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::TIC1: return "TIC1";
    case ModelVariant::TIC0: return "TIC0";
    case ModelVariant::TIC1_D0: return "TIC1-D0";
  }
  return "?";
}

PhaseConvention parse_phase_convention(const std::string& s) {
  if (s == "plain") return PhaseConvention::Plain;
  if (s == "coulomb") return PhaseConvention::CoulombPhase;
  throw std::invalid_argument("unknown phase convention '" + s + "' (plain, coulomb)");
}

std::string to_string(PhaseConvention p) { return p == PhaseConvention::Plain ? "plain" : "coulomb"; }

IonDensityMatrix IonDensityMatrix::initial(std::size_t n, double t0) {
  return {Eigen::MatrixXcd::Zero(n, n), 1.0, t0};
}

double IonDensityMatrix::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

ode::Vec pack_state(const IonDensityMatrix& s) {
  const auto n = s.rho.rows();
  ode::Vec y(n * n + 1);
  y.head(n * n) = Eigen::Map<const ode::Vec>(s.rho.data(), n * n);
  y[n * n] = s.rho0;
  return y;
}

IonDensityMatrix unpack_state(const ode::Vec& y, std::size_t n, double t) {
  IonDensityMatrix s;
  s.rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), n, n);
  s.rho0 = y[n * n].real();
  s.t = t;
  return s;
}

IonizationModel::IonizationModel(const MoleculeModel& molecule, const LaserField& field,
                                 const PropagationOptions& opt)
    : molecule_(molecule), field_(field), opt_(opt) {
  const std::size_t n = molecule_.size();
  b_pos_ = molecule_.b0(+1);
  b_neg_ = molecule_.b0(-1);
  coulomb_.resize(n);
  active_.resize(n);
  unit_rates_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ch = molecule_.channel(i);
    coulomb_[i] = opt_.phase == PhaseConvention::CoulombPhase
                      ? std::polar(1.0, units::kPi * ch.Z / ch.kappa())
                      : cd(1.0);
    active_[i] = std::abs(b_pos_[i]) > 0.0 || std::abs(b_neg_[i]) > 0.0;
    if (!active_[i]) continue;
    // degenerate partners share one rate object
    for (std::size_t j = 0; j < i; ++j)
      if (unit_rates_[j] && molecule_.channel(j).E == ch.E && molecule_.channel(j).Z == ch.Z) {
        unit_rates_[i] = unit_rates_[j];
        break;
      }
    if (!unit_rates_[i])
      unit_rates_[i] = std::make_shared<ChannelRate>(ch.E, ch.Z, field_, opt_.rate, opt_.rate_options);
  }
  if (opt_.neutral == NeutralPopulation::Interpolated) build_depletion_table();
  find_threshold_times();
}

void IonizationModel::find_threshold_times() {
  // The photon sum in the nonadiabatic prefactor has a square-root cusp
  // whenever nu(t) = (E/omega)(1 + 1/(2 gamma(t)^2)) crosses an integer.
  thresholds_.clear();
  if (opt_.rate != RateKind::Nonadiabatic || field_.envelope_kind() == EnvelopeKind::Cw ||
      field_.F0() <= 0.0 || opt_.threshold_envelope_min >= 1.0)
    return;
  const double w = field_.omega(), F0 = field_.F0();
  auto solve = [&](double lo, double hi, double target) {
    // envelope is monotone on [lo, hi]
    const bool rising = field_.envelope(lo) < field_.envelope(hi);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      ((field_.envelope(mid) < target) == rising ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  std::vector<double> seen;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!active_[i]) continue;
    const double E = molecule_.channel(i).E;
    if (std::find(seen.begin(), seen.end(), E) != seen.end()) continue;
    seen.push_back(E);
    const double kappa = std::sqrt(2 * E);
    // nu grows with the local amplitude
    const double nu_lo = specialfn::ppt_nu(E, w, w * kappa / (F0 * opt_.threshold_envelope_min));
    const double nu_hi = specialfn::ppt_nu(E, w, w * kappa / F0);
    // dense thresholds carry tiny cusps; restarting there only costs time
    if (nu_hi - nu_lo > opt_.max_thresholds) continue;
    for (double N = std::ceil(nu_lo); N < nu_hi; N += 1.0) {
      // amplitude at which nu = N
      const double gamma = 1.0 / std::sqrt(2.0 * (N * w / E - 1.0));
      const double f = w * kappa / (gamma * F0);
      if (!(f < 1.0)) continue;
      thresholds_.push_back(solve(field_.t_start(), 0.0, f));
      thresholds_.push_back(solve(0.0, field_.t_end(), f));
    }
  }
  std::sort(thresholds_.begin(), thresholds_.end());
}

Eigen::VectorXcd IonizationModel::amplitudes(double t) const {
  const std::size_t n = size();
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
  const double F = field_.field_at(t);
  const auto& b = F >= 0.0 ? b_pos_ : b_neg_;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active_[i]) continue;
    const double ab = std::abs(b[i]);
    if (ab == 0.0) continue;  // no coherence injection through a node
    const double w = (*unit_rates_[i])(t);
    if (w == 0.0) continue;
    u[i] = b[i] * std::sqrt(w) * coulomb_[i];
  }
  return u;
}

Eigen::VectorXd IonizationModel::rates(double t) const { return amplitudes(t).cwiseAbs2(); }

double IonizationModel::total_rate(double t) const { return amplitudes(t).squaredNorm(); }

Eigen::MatrixXcd IonizationModel::gamma_matrix(double t, double rho0) const {
  return gamma_from_amplitudes(amplitudes(t), rho0);
}

Eigen::MatrixXcd IonizationModel::gamma_from_amplitudes(const Eigen::VectorXcd& u, double rho0) const {
  if (opt_.variant == ModelVariant::TIC0) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(size(), size());
    G.diagonal() = (rho0 * u.cwiseAbs2()).cast<cd>();
    return G;
  }
  Eigen::MatrixXcd G = rho0 * u * u.adjoint();
  G.diagonal() = (rho0 * u.cwiseAbs2()).cast<cd>();
  return G;
}

Eigen::MatrixXcd IonizationModel::hamiltonian(double t) const {
  if (opt_.variant == ModelVariant::TIC1_D0) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(size(), size());
    H.diagonal() = molecule_.energies().cast<cd>();
    return H;
  }
  return hamiltonian_at(molecule_, field_, t);
}

void IonizationModel::build_depletion_table() {
  dep_t_ = default_time_grid(field_, opt_.output_step_as);
  dep_L_.assign(dep_t_.size(), 0.0);
  dep_w_.assign(dep_t_.size(), 0.0);
  auto w = [&](double t) { return total_rate(t); };
  dep_w_[0] = w(dep_t_[0]);
  for (std::size_t k = 1; k < dep_t_.size(); ++k) {
    dep_L_[k] = dep_L_[k - 1] + quad::gauss_kronrod(w, dep_t_[k - 1], dep_t_[k], 1e-12, 1e-20).value;
    dep_w_[k] = w(dep_t_[k]);
  }
}

double IonizationModel::neutral_population(double t) const {
  if (dep_t_.empty()) throw std::logic_error("depletion table not built");
  if (t <= dep_t_.front()) return 1.0;
  if (t >= dep_t_.back()) return std::exp(-dep_L_.back());
  const auto it = std::upper_bound(dep_t_.begin(), dep_t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - dep_t_.begin()) - 1;
  const double h = dep_t_[k + 1] - dep_t_[k];
  const double x = (t - dep_t_[k]) / h;
  // cubic Hermite with dL/dt = total rate at the nodes
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  const double L = h00 * dep_L_[k] + h10 * h * dep_w_[k] + h01 * dep_L_[k + 1] + h11 * h * dep_w_[k + 1];
  return std::exp(-L);
}

void IonizationModel::rhs(double t, const ode::Vec& y, ode::Vec& dydt) const {
  const Eigen::Index n = static_cast<Eigen::Index>(size());
  const Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), n, n);
  const double r0 = y[n * n].real();
  const Eigen::MatrixXcd H = hamiltonian(t);
  const Eigen::VectorXcd u = amplitudes(t);
  const double r0_gamma =
      opt_.neutral == NeutralPopulation::Interpolated ? neutral_population(t) : r0;
  Eigen::Map<Eigen::MatrixXcd> d(dydt.data(), n, n);
  d.noalias() = cd(0, -1) * (H * rho - rho * H);
  d += gamma_from_amplitudes(u, r0_gamma);
  dydt[n * n] = -r0 * u.squaredNorm();
}

std::vector<double> default_time_grid(const LaserField& field, double step_as) {
  const double dt = step_as * units::kAttosecondAu;
  const double t0 = field.t_start(), t1 = field.t_end();
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g[k] = t0 + k * dt;
  if (t1 - g.back() > 1e-9 * dt) g.push_back(t1);
  return g;
}

std::string group_of(const std::string& label) {
  if (!label.empty() && (label.back() == '+' || label.back() == '-'))
    return label.substr(0, label.size() - 1);
  return label;
}

IonDensityMatrix SimulationResult::final_state() const {
  if (t.empty()) throw std::logic_error("empty simulation result");
  return {rho.back(), rho0.back(), t.back()};
}

std::vector<double> SimulationResult::population_series(std::size_t i) const {
  std::vector<double> p(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) p[k] = rho[k](i, i).real();
  return p;
}

std::vector<double> SimulationResult::group_series(const std::string& group) const {
  std::vector<double> p(t.size(), 0.0);
  bool any = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (group_of(labels[i]) != group) continue;
    any = true;
    for (std::size_t k = 0; k < t.size(); ++k) p[k] += rho[k](i, i).real();
  }
  if (!any) throw std::out_of_range("no channel group '" + group + "'");
  return p;
}

SimulationResult propagate(const IonizationModel& model, const std::vector<double>& t_grid_in) {
  const auto& opt = model.options();
  const std::vector<double> grid =
      t_grid_in.empty() ? default_time_grid(model.field(), opt.output_step_as) : t_grid_in;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("propagate: time grid must increase");
  const std::size_t n = model.size();
  SimulationResult res;
  for (const auto& c : model.molecule().channels()) res.labels.push_back(c.label);
  res.t.reserve(grid.size());
  res.rho.reserve(grid.size());

  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_step = units::fs_to_au(opt.max_step_fs);
  auto f = [&model](double t, const ode::Vec& y, ode::Vec& dy) { model.rhs(t, y, dy); };
  auto& s = res.summary;
  s.min_diagonal = 0.0;
  auto out = [&](double t, const ode::Vec& y) {
    auto st = unpack_state(y, n, t);
    res.t.push_back(t);
    res.field.push_back(model.field().field_at(t));
    res.rho0.push_back(st.rho0);
    s.max_hermiticity_error = std::max(s.max_hermiticity_error, st.hermiticity_error());
    s.max_trace_error = std::max(s.max_trace_error, std::abs(st.trace() + st.rho0 - 1.0));
    s.min_diagonal = std::min(s.min_diagonal, st.populations().minCoeff());
    res.rho.push_back(std::move(st.rho));
  };
  s.stats = ode::integrate(f, grid.front(), pack_state(IonDensityMatrix::initial(n, grid.front())),
                           grid, out, o, model.threshold_times());

  const auto& last = res.rho.back();
  s.final_populations = last.diagonal().real();
  for (std::size_t i = 0; i < n; ++i) s.group_populations[group_of(res.labels[i])] += last(i, i).real();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      CoherenceSummary c{i, j, 0.0, std::abs(last(i, j))};
      for (const auto& r : res.rho) c.max_abs = std::max(c.max_abs, std::abs(r(i, j)));
      s.coherences.push_back(c);
    }
  s.yield = 1.0 - res.rho0.back();
  return res;
}

SimulationResult propagate(const MoleculeModel& molecule, const LaserField& field,
                           const PropagationOptions& opt, const std::vector<double>& t_grid) {
  const IonizationModel model(molecule, field, opt);
  return propagate(model, t_grid);
}

EomStepper::EomStepper(const IonizationModel& model, const IonDensityMatrix& start)
    : model_(model),
      solver_([&model](double t, const ode::Vec& y, ode::Vec& dy) { model.rhs(t, y, dy); }, start.t,
              pack_state(start), [&] {
                ode::Options o;
                o.rtol = model.options().rtol;
                o.atol = model.options().atol;
                o.max_step = units::fs_to_au(model.options().max_step_fs);
                return o;
              }()) {}

IonDensityMatrix EomStepper::step(double t_limit) {
  solver_.step(t_limit);
  return state();
}

IonDensityMatrix EomStepper::state() const {
  return unpack_state(solver_.y(), model_.size(), solver_.t());
}

double adiabaticity_gamma_e(double delta_eV, double wavelength_nm) {
  if (!(delta_eV > 0.0)) throw std::invalid_argument("adiabaticity_gamma_e: delta must be > 0");
  return units::wavelength_to_omega(wavelength_nm) / units::ev_to_au(delta_eV);
}

}  // namespace dmsfi

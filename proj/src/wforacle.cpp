#include "dmsfi/wforacle.hpp"

#include "dmsfi/kinematics.hpp"
#include "dmsfi/quadrature.hpp"
#include "dmsfi/units.hpp"

#include <cmath>
#include <stdexcept>

namespace dmsfi::wforacle {

using cd = std::complex<double>;

std::vector<double> birth_grid(const LaserField& field, int points_per_cycle) {
  if (points_per_cycle < 1) throw std::invalid_argument("birth_grid: points_per_cycle must be >= 1");
  const double t0 = field.t_start(), t1 = field.t_end();
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / field.period() * points_per_cycle));
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g[k] = t0 + (t1 - t0) * static_cast<double>(k) / n;
  return g;
}

std::vector<Eigen::MatrixXcd> propagator_chain(const IonizationModel& model,
                                               const std::vector<double>& grid,
                                               const OracleOptions& opt) {
  const Eigen::Index n = static_cast<Eigen::Index>(model.size());
  auto f = [&](double t, const ode::Vec& y, ode::Vec& dy) {
    const Eigen::Map<const Eigen::MatrixXcd> U(y.data(), n, n);
    Eigen::Map<Eigen::MatrixXcd> dU(dy.data(), n, n);
    dU.noalias() = cd(0, -1) * (model.hamiltonian(t) * U);
  };
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(grid.size());
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_step = units::fs_to_au(model.options().max_step_fs);
  ode::integrate(f, grid.front(), Eigen::Map<const ode::Vec>(I.data(), n * n), grid,
                 [&](double, const ode::Vec& y) {
                   out.emplace_back(Eigen::Map<const Eigen::MatrixXcd>(y.data(), n, n));
                 },
                 o);
  return out;
}

std::vector<double> neutral_population(const IonizationModel& model, const std::vector<double>& grid) {
  std::vector<double> r0(grid.size(), 1.0);
  auto w = [&](double t) { return model.total_rate(t); };
  double L = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    L += quad::gauss_kronrod(w, grid[k - 1], grid[k], 1e-12, 1e-22).value;
    r0[k] = std::exp(-L);
  }
  return r0;
}

std::vector<BirthSlice> birth_slices(const IonizationModel& model, const std::vector<double>& grid,
                                     const OracleOptions& opt) {
  if (grid.size() < 2) throw std::invalid_argument("birth grid needs at least two points");
  const auto U = propagator_chain(model, grid, opt);
  const auto r0 = neutral_population(model, grid);
  std::vector<BirthSlice> s(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double left = k > 0 ? grid[k] - grid[k - 1] : 0.0;
    const double right = k + 1 < grid.size() ? grid[k + 1] - grid[k] : 0.0;
    s[k].t_birth = grid[k];
    s[k].weight = 0.5 * (left + right);
    s[k].injection = model.gamma_matrix(grid[k], r0[k]) * s[k].weight;
    s[k].propagator = U[k];
  }
  return s;
}

Eigen::MatrixXcd slice_sum(const std::vector<BirthSlice>& slices, bool parallel) {
  if (slices.empty()) return {};
  const Eigen::Index n = slices.front().injection.rows();
  constexpr std::size_t kBlock = 64;
  const long nblocks = static_cast<long>((slices.size() + kBlock - 1) / kBlock);
  std::vector<Eigen::MatrixXcd> partial(nblocks, Eigen::MatrixXcd::Zero(n, n));
  auto block = [&](long b) {
    const std::size_t lo = b * kBlock, hi = std::min(slices.size(), lo + kBlock);
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& s = slices[k];
      partial[b].noalias() += s.propagator.adjoint() * s.injection * s.propagator;
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nblocks; ++b) block(b);
  } else {
    for (long b = 0; b < nblocks; ++b) block(b);
  }
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& p : partial) total += p;
  return total;
}

IonDensityMatrix reconstruct_rho(const IonizationModel& model, const std::vector<double>& grid,
                                 const OracleOptions& opt) {
  const auto slices = birth_slices(model, grid, opt);
  const Eigen::MatrixXcd S = slice_sum(slices, opt.parallel);
  const auto& Uend = slices.back().propagator;
  IonDensityMatrix out;
  out.rho = Uend * S * Uend.adjoint();
  out.rho0 = neutral_population(model, {grid.front(), grid.back()}).back();
  out.t = grid.back();
  return out;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd d = a - b;
  const Eigen::MatrixXcd h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::vector<ConvergenceRow> convergence_table(const IonizationModel& model,
                                              const Eigen::MatrixXcd& reference,
                                              const std::vector<int>& points_per_cycle,
                                              const OracleOptions& opt) {
  std::vector<ConvergenceRow> rows;
  for (int ppc : points_per_cycle) {
    const auto r = reconstruct_rho(model, birth_grid(model.field(), ppc), opt);
    rows.push_back({ppc, trace_distance(r.rho, reference)});
  }
  return rows;
}

std::vector<double> observed_orders(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> p;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const double ratio = static_cast<double>(rows[k + 1].points_per_cycle) / rows[k].points_per_cycle;
    p.push_back(std::log(rows[k].trace_distance / rows[k + 1].trace_distance) / std::log(ratio));
  }
  return p;
}

double fitted_order(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("fitted_order: need at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.points_per_cycle)), y = -std::log(r.trace_distance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ElectronDiagnostics electron_dm_diagnostics(const MoleculeModel& molecule, const LaserField& field,
                                            const std::vector<double>& p_grid, double t_final) {
  const std::size_t n = molecule.size(), m = p_grid.size();
  if (m < 2) throw std::invalid_argument("electron_dm_diagnostics: need at least two momenta");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ch = molecule.channel(i);
    const double kappa = ch.kappa();
    const double c_unit = normalization_sq_unit(ch.E, ch.Z, field.F0(), field.omega());
    for (std::size_t k = 0; k < m; ++k) {
      const double tb = kinematics::birth_of_pz(field, kappa, p_grid[k], 0.0);
      const cd b = molecule.b0(field.field_at(tb) >= 0.0 ? 1 : -1)[i];
      if (std::abs(b) == 0.0) continue;
      const double im_s = kinematics::action_imag(field, ch.E, 0.0, tb);
      const double re_s = kinematics::action_real(field, ch.E, 0.0, p_grid[k], t_final, tb);
      a(i, k) = b * std::sqrt(c_unit) * std::exp(im_s) * std::polar(1.0, -re_s);
    }
  }
  ElectronDiagnostics d;
  d.p_z = p_grid;
  d.density.resize(m);
  for (std::size_t k = 0; k < m; ++k) d.density[k] = a.col(k).squaredNorm();
  // trapezoid weights in p_z
  Eigen::VectorXd w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double left = k > 0 ? p_grid[k] - p_grid[k - 1] : 0.0;
    const double right = k + 1 < m ? p_grid[k + 1] - p_grid[k] : 0.0;
    w[k] = 0.5 * (left + right);
  }
  d.channel_matrix = a * w.asDiagonal() * a.adjoint();
  const double tr = d.channel_matrix.trace().real();
  if (tr > 0.0) {
    d.purity = d.channel_matrix.cwiseAbs2().sum() / (tr * tr);
    d.incoherent_bound = d.channel_matrix.diagonal().cwiseAbs2().sum() / (tr * tr);
  }
  return d;
}

}  // namespace dmsfi::wforacle

#pragma once

#include "dmsfi/dmsfi.hpp"

#include <Eigen/Dense>
#include <vector>

namespace dmsfi::wforacle {

// Builds rho_N(t_end) as a sum over birth slices of ionic wave packets,
// independently of the density-matrix equation of motion:
//   rho(t_end) = sum_b U(t_end, t_b) Gamma(t_b) U(t_end, t_b)^H dt_b
// with U the ionic propagator, trapezoid weights, and the neutral population
// from a separate quadrature of the total rate.

struct BirthSlice {
  double t_birth = 0.0;
  double weight = 0.0;            // trapezoid weight
  Eigen::MatrixXcd injection;     // Gamma(t_b) * weight
  Eigen::MatrixXcd propagator;    // U(t_b, t_0)
};

struct OracleOptions {
  double rtol = 1e-10;  // propagator integration
  double atol = 1e-12;
  bool parallel = true;
};

/// Uniform birth grid over the pulse window with the given points per cycle.
std::vector<double> birth_grid(const LaserField& field, int points_per_cycle);

/// U(t_k, t_0) for every grid time, from one integration of i dU/dt = H U.
std::vector<Eigen::MatrixXcd> propagator_chain(const IonizationModel& model,
                                               const std::vector<double>& grid,
                                               const OracleOptions& opt = {});

/// rho0 at every grid time from adaptive quadrature of the total rate.
std::vector<double> neutral_population(const IonizationModel& model, const std::vector<double>& grid);

std::vector<BirthSlice> birth_slices(const IonizationModel& model, const std::vector<double>& grid,
                                     const OracleOptions& opt = {});

/// Sum over slices of U_b^H Gamma_b U_b dt_b (interaction picture at t_0).
/// Serial and OpenMP paths reduce in the same fixed block order.
Eigen::MatrixXcd slice_sum(const std::vector<BirthSlice>& slices, bool parallel);

IonDensityMatrix reconstruct_rho(const IonizationModel& model, const std::vector<double>& grid,
                                 const OracleOptions& opt = {});

/// (1/2) sum |eig(a - b)| for Hermitian a, b.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct ConvergenceRow {
  int points_per_cycle = 0;
  double trace_distance = 0.0;  // to the reference state
};

/// Trace distances of reconstructions on successively doubled grids.
std::vector<ConvergenceRow> convergence_table(const IonizationModel& model,
                                              const Eigen::MatrixXcd& reference,
                                              const std::vector<int>& points_per_cycle,
                                              const OracleOptions& opt = {});

/// Observed order log2(e_k / e_{k+1}) between consecutive rows.
std::vector<double> observed_orders(const std::vector<ConvergenceRow>& rows);
/// Least-squares slope of -log(trace distance) against log(points per cycle).
double fitted_order(const std::vector<ConvergenceRow>& rows);

struct ElectronDiagnostics {
  std::vector<double> p_z;
  std::vector<double> density;          // sum_i |a_ip|^2 at p_perp = 0
  Eigen::MatrixXcd channel_matrix;      // sum_p a_ip a_jp^* dp
  double purity = 1.0;                  // tr(M^2) / tr(M)^2 on the grid
  double incoherent_bound = 1.0;        // sum P_i^2 / (sum P_i)^2
};

/// Momentum-space population and channel-mixing purity proxy on a p_z grid
/// (p_perp = 0) for a cw carrier. Amplitudes carry the structure-factor
/// phase and exp(-i Re S) up to t_final.
ElectronDiagnostics electron_dm_diagnostics(const MoleculeModel& molecule, const LaserField& field,
                                            const std::vector<double>& p_grid, double t_final);

}  // namespace dmsfi::wforacle

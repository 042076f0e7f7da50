#include "dmsfi/units.hpp"
#include "dmsfi/wforacle.hpp"

#include <doctest.h>

#include <cmath>

using namespace dmsfi;

namespace {

LaserField short_pulse() {
  LaserParams p;
  p.wavelength_nm = 900;
  p.intensity_W_cm2 = 2e14;
  p.fwhm_fs = 3.7;
  p.envelope = EnvelopeKind::Gaussian;
  return LaserField(p);
}

LaserField cw(double wavelength, double intensity) {
  LaserParams p;
  p.wavelength_nm = wavelength;
  p.intensity_W_cm2 = intensity;
  return LaserField(p);
}

}  // namespace

TEST_SUITE("wforacle") {

TEST_CASE("birth grid covers the window") {
  const auto f = short_pulse();
  const auto g = wforacle::birth_grid(f, 40);
  CHECK(g.front() == f.t_start());
  CHECK(g.back() == doctest::Approx(f.t_end()).epsilon(1e-15));
  const double h = g[1] - g[0];
  CHECK(h <= f.period() / 40 * (1 + 1e-12));
  CHECK_THROWS(wforacle::birth_grid(f, 0));
}

TEST_CASE("slice sum: OpenMP and serial reductions are bit-identical") {
  const auto n2 = load_molecule("n2").with_theta(units::kPi / 4);
  const IonizationModel model(n2, short_pulse());
  const auto slices = wforacle::birth_slices(model, wforacle::birth_grid(model.field(), 80));
  for (const auto& s : slices) CHECK(s.weight >= 0.0);
  const auto a = wforacle::slice_sum(slices, false);
  const auto b = wforacle::slice_sum(slices, true);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  // injections are PSD
  for (std::size_t k = 0; k < slices.size(); k += 11) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(slices[k].injection, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-15 * std::max(1.0, es.eigenvalues().maxCoeff()));
  }
}

TEST_CASE("propagators are unitary") {
  const auto co2 = load_molecule("co2").with_theta(0.5);
  const IonizationModel model(co2, short_pulse());
  const auto grid = wforacle::birth_grid(model.field(), 40);
  const auto U = wforacle::propagator_chain(model, grid);
  REQUIRE(U.size() == grid.size());
  for (std::size_t k = 0; k < U.size(); k += 9) {
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(U[k].rows(), U[k].cols());
    CHECK((U[k].adjoint() * U[k] - I).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("single channel reproduces the yield") {
  const auto h = load_molecule("h");
  LaserParams p;
  p.wavelength_nm = 800;
  p.intensity_W_cm2 = 2e14;
  p.fwhm_fs = 10;
  p.envelope = EnvelopeKind::CosineSquare;
  const LaserField f(p);
  PropagationOptions o;
  o.variant = ModelVariant::TIC1_D0;
  const IonizationModel model(h, f, o);
  const auto r = wforacle::reconstruct_rho(model, wforacle::birth_grid(f, 320));
  const double expect = ionization_yield(h.channel(0), h.orientation(), f, o.rate, o.rate_options);
  CHECK(r.rho(0, 0).real() == doctest::Approx(expect).epsilon(1e-3));
  CHECK(r.rho0 == doctest::Approx(1.0 - expect).epsilon(1e-10));
}

TEST_CASE("zero dipoles: coherences equal the phase-weighted quadrature") {
  const auto n2 = load_molecule("n2");
  const MoleculeModel bare("n2-bare", n2.channels(), {}, units::kPi / 4);
  const IonizationModel model(bare, short_pulse());
  const auto grid = wforacle::birth_grid(model.field(), 80);
  const auto r = wforacle::reconstruct_rho(model, grid);
  const auto r0 = wforacle::neutral_population(model, grid);
  const auto E = bare.energies();
  const double t_end = grid.back();
  const Eigen::Index n = static_cast<Eigen::Index>(bare.size());
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double left = k > 0 ? grid[k] - grid[k - 1] : 0.0;
    const double right = k + 1 < grid.size() ? grid[k + 1] - grid[k] : 0.0;
    const auto G = model.gamma_matrix(grid[k], r0[k]);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        expect(i, j) += G(i, j) * std::polar(1.0, -(E[i] - E[j]) * (t_end - grid[k])) * 0.5 * (left + right);
  }
  CHECK((r.rho - expect).cwiseAbs().maxCoeff() < 1e-7 * expect.cwiseAbs().maxCoeff());
}

TEST_CASE("reconstruction approaches the propagated state under refinement") {
  const auto n2 = load_molecule("n2").with_theta(units::kPi / 4);
  PropagationOptions o;
  o.rtol = 1e-11;
  o.atol = 1e-13;
  const IonizationModel model(n2, short_pulse(), o);
  const auto ref = propagate(model);
  const auto rows = wforacle::convergence_table(model, ref.rho.back(), {40, 80, 160, 320});
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].trace_distance < rows[k - 1].trace_distance);
  CHECK(rows.back().trace_distance < 1e-4);
  // photon-threshold cusps in the rate cap the trapezoid sum at order 3/2
  CHECK(wforacle::fitted_order(rows) > 1.5);
}

TEST_CASE("smooth rates: the birth sum converges far faster than second order") {
  const auto n2 = load_molecule("n2").with_theta(units::kPi / 4);
  PropagationOptions o;
  o.rate = RateKind::Adk;
  o.rtol = 1e-11;
  o.atol = 1e-13;
  const IonizationModel model(n2, short_pulse(), o);
  const auto ref = propagate(model);
  const auto rows = wforacle::convergence_table(model, ref.rho.back(), {20, 40});
  CHECK(rows[1].trace_distance < rows[0].trace_distance / 4);
  CHECK(rows[1].trace_distance < 1e-8);
}

TEST_CASE("fitted order of an exact power law") {
  std::vector<wforacle::ConvergenceRow> rows;
  for (int n : {10, 20, 40, 80}) rows.push_back({n, 3.0 * std::pow(n, -2.0)});
  CHECK(wforacle::fitted_order(rows) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(wforacle::observed_orders(rows)[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("trace distance basics") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = a;
  a(0, 0) = 0.7;
  a(1, 1) = 0.3;
  b(0, 0) = 0.4;
  b(1, 1) = 0.6;
  CHECK(wforacle::trace_distance(a, b) == doctest::Approx(0.3));
  CHECK(wforacle::trace_distance(a, a) == 0.0);
  CHECK(wforacle::trace_distance(a, b) == doctest::Approx(wforacle::trace_distance(b, a)));
}

TEST_CASE("electron density matrix diagnostics") {
  const auto f = cw(800, 1e14);
  const double t_final = units::kPi / (2 * f.omega());
  std::vector<double> p;
  // p_z = 0 is the birth at the field zero; the grid straddles it
  for (int k = -60; k < 60; ++k) p.push_back(0.9 * (k + 0.5) / 60.0);
  SUBCASE("one channel is channel-pure") {
    const auto h = load_molecule("h");
    const auto d = wforacle::electron_dm_diagnostics(h, f, p, t_final);
    CHECK(d.purity == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t k = 0; k < p.size(); ++k)
      CHECK(d.density[k] == doctest::Approx(d.density[p.size() - 1 - k]).epsilon(1e-10));
  }
  SUBCASE("two populated channels mix") {
    const auto n2 = load_molecule("n2").with_theta(units::kPi / 4);
    const auto d = wforacle::electron_dm_diagnostics(n2, f, p, t_final);
    CHECK(d.purity < 1.0);
    CHECK(d.purity >= d.incoherent_bound - 1e-12);
    CHECK(d.channel_matrix.trace().real() > 0.0);
    CHECK((d.channel_matrix - d.channel_matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-15 * d.channel_matrix.cwiseAbs().maxCoeff());
  }
}

}

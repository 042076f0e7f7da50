#include "dmsfi/channels.hpp"
#include "dmsfi/units.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dmsfi;
using cd = std::complex<double>;

namespace {

EulerAngles tilt(double theta) { return {0.0, theta, 0.0}; }

// every C_lm has (-1)^l equal to the stored parity
bool parity_pure(const Channel& c) {
  for (const auto& s : c.clm)
    if ((s.l % 2 == 0 ? 1 : -1) != c.parity) return false;
  return true;
}

}  // namespace

TEST_SUITE("channels") {

TEST_CASE("bundled molecules load with the tabulated coefficients") {
  const auto names = bundled_molecules();
  CHECK(names.size() >= 3);
  const auto n2 = load_molecule("n2");
  CHECK(n2.size() == 4);
  const auto& x = n2.channel(n2.index_of("X"));
  CHECK(x.clm.size() == 3);
  CHECK(x.clm[0].c == 3.16);
  CHECK(x.clm[1].c == 1.15);
  CHECK(x.clm[2].c == 0.06);
  CHECK(units::au_to_ev(x.E) == doctest::Approx(15.6).epsilon(1e-14));
  const auto co2 = load_molecule("co2");
  CHECK(co2.size() == 6);
  const auto& c = co2.channel(co2.index_of("C"));
  CHECK(c.clm.size() == 4);
  CHECK(c.clm[3].c == 0.1);
  CHECK(co2.channel(co2.index_of("X+")).partner == std::optional<std::string>("X-"));
  CHECK_THROWS(load_molecule("no-such-molecule"));
  CHECK_THROWS(n2.index_of("Q"));
}

TEST_CASE("hydrogen amplitude is sqrt(2) at any angle and field sign") {
  const auto h = load_molecule("h");
  for (double th : {0.0, 0.4, 1.3, 2.9})
    for (int s : {1, -1}) CHECK(std::abs(rotate_Bm(h.channel(0), tilt(th), s) - cd(std::sqrt(2.0))) < 1e-14);
}

TEST_CASE("sigma amplitudes at zero angle") {
  const auto n2 = load_molecule("n2");
  const auto& X = n2.channel(n2.index_of("X"));
  const auto& B = n2.channel(n2.index_of("B"));
  // positive field: sgn(-F) = -1 multiplies odd l
  const double expect = 3.16 * specialfn::Q_factor(0, 0) + 1.15 * specialfn::Q_factor(2, 0) -
                        0.06 * specialfn::Q_factor(3, 0);
  CHECK(std::abs(rotate_Bm(X, tilt(0), 1) - cd(expect)) < 1e-13);
  CHECK(std::abs(rotate_Bm(B, tilt(0), -1) + rotate_Bm(B, tilt(0), 1)) < 1e-13);
  CHECK(std::abs(rotate_Bm(B, tilt(0), 1).imag()) < 1e-14);
  CHECK(std::abs(rotate_Bm(n2.channel(n2.index_of("A+")), tilt(0), 1)) < 1e-14);
  const auto co2 = load_molecule("co2");
  for (const char* pi : {"X+", "X-", "A+", "A-"})
    CHECK(std::abs(rotate_Bm(co2.channel(co2.index_of(pi)), tilt(0), 1)) < 1e-14);
}

TEST_CASE("field reversal multiplies the amplitude by the channel parity") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> ang(0, units::kPi);
  for (const char* name : {"n2", "co2"}) {
    const auto m = load_molecule(name);
    for (int k = 0; k < 10; ++k) {
      const auto mm = m.with_theta(ang(rng));
      for (std::size_t i = 0; i < mm.size(); ++i) {
        if (!parity_pure(mm.channel(i))) continue;
        CHECK(std::abs(mm.b0(-1)[i] - double(mm.channel(i).parity) * mm.b0(1)[i]) < 1e-13);
      }
    }
  }
}

TEST_CASE("only the N2 X channel carries a mixed-parity coefficient") {
  const auto n2 = load_molecule("n2");
  CHECK(!parity_pure(n2.channel(n2.index_of("X"))));
  for (const char* l : {"A+", "A-", "B"}) CHECK(parity_pure(n2.channel(n2.index_of(l))));
  const auto co2 = load_molecule("co2");
  for (const auto& c : co2.channels()) CHECK(parity_pure(c));
}

TEST_CASE("homonuclear alignment symmetry about 90 degrees") {
  const auto n2 = load_molecule("n2");
  for (double th : {0.1, 0.5, 1.0, 1.4})
    for (std::size_t i = 0; i < n2.size(); ++i)
      if (parity_pure(n2.channel(i)))
        CHECK(std::abs(n2.with_theta(th).b0(1)[i]) ==
            doctest::Approx(std::abs(n2.with_theta(units::kPi - th).b0(1)[i])).epsilon(1e-12));
}

TEST_CASE("dipole Hamiltonian") {
  const auto n2 = load_molecule("n2");
  const auto H0 = hamiltonian_at(n2, 0.0);
  CHECK((H0 - Eigen::MatrixXcd(n2.energies().cast<cd>().asDiagonal())).norm() == 0.0);

  const double F = 0.05;
  const auto H = hamiltonian_at(n2, F);
  const auto x = n2.index_of("X"), b = n2.index_of("B"), a = n2.index_of("A+");
  CHECK(std::abs(H(x, b) - cd(-0.75 * F)) < 1e-15);
  CHECK(std::abs(H(x, a)) < 1e-15);

  const auto co2 = load_molecule("co2").with_theta(units::kPi / 2);
  const auto Hc = hamiltonian_at(co2, F);
  CHECK(std::abs(Hc(co2.index_of("X+"), co2.index_of("A+"))) < 1e-15);
  CHECK(std::abs(Hc(co2.index_of("X+"), co2.index_of("B"))) == doctest::Approx(0.16 * F).epsilon(1e-14));
  CHECK(std::abs(Hc(co2.index_of("B"), co2.index_of("C"))) < 1e-15);

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> ang(0, units::kPi), fld(-0.1, 0.1);
  for (int k = 0; k < 50; ++k) {
    const auto m = load_molecule("co2").with_theta(ang(rng));
    const auto Hk = hamiltonian_at(m, fld(rng));
    CHECK((Hk - Hk.adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("time-dependent Hamiltonian follows the laser field") {
  LaserParams p;
  p.intensity_W_cm2 = 2e14;
  p.wavelength_nm = 900;
  const LaserField f(p);
  const auto n2 = load_molecule("n2").with_theta(0.3);
  const double t = 12.3;
  CHECK((hamiltonian_at(n2, f, t) - hamiltonian_at(n2, f.field_at(t))).norm() == 0.0);
}

TEST_CASE("schema rejects unknown keys and bad channels") {
  const std::string ok = R"({"name": "T", "channels": [{"label": "a", "E_eV": 10, "Clm": [[0, 0, 1]]}]})";
  CHECK(molecule_from_json_text(ok).size() == 1);
  CHECK_THROWS(molecule_from_json_text(R"({"name": "T", "channels": [], "colour": 1})"));
  CHECK_THROWS(molecule_from_json_text(
      R"({"name": "T", "channels": [{"label": "a", "E_eV": 10, "Clm": [[0, 0, 1]], "spin": 2}]})"));
  CHECK_THROWS(molecule_from_json_text(R"({"name": "T", "channels": [{"label": "a", "E_eV": -1, "Clm": [[0, 0, 1]]}]})"));
  CHECK_THROWS(molecule_from_json_text(R"({"name": "T", "channels": [{"label": "a", "E_eV": 10, "Clm": [[1, 2, 1]]}]})"));
  CHECK_THROWS(molecule_from_json_text(R"({"name": "T", "channels": [{"label": "a", "E_eV": 10, "Clm": [[0, 0, 0]]}]})"));
  CHECK_THROWS(molecule_from_json_text(
      R"({"name": "T", "channels": [{"label": "a", "E_eV": 10, "Clm": [[0, 0, 1]]}],
          "dipoles": [{"from": "a", "to": "zz", "d_au": [0, 0, 1]}]})"));
}

TEST_CASE("dipole couplings are Hermitian including imaginary parts") {
  const auto m = molecule_from_json_text(R"({"name": "T", "channels": [
      {"label": "a", "E_eV": 10, "Clm": [[0, 0, 1]]},
      {"label": "b", "E_eV": 11, "Clm": [[1, 0, 1]]}],
      "dipoles": [{"from": "a", "to": "b", "d_au": [0, 0, 0.5], "d_imag_au": [0, 0, 0.25]}]})");
  const auto H = hamiltonian_at(m, 0.1);
  CHECK(std::abs(H(0, 1) - cd(-0.05, -0.025)) < 1e-15);
  CHECK(std::abs(H(1, 0) - std::conj(H(0, 1))) < 1e-15);
}

}  // TEST_SUITE

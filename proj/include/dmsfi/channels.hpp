#pragma once

#include "dmsfi/laser.hpp"
#include "dmsfi/specialfn.hpp"

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace dmsfi {

using specialfn::EulerAngles;

struct StructureCoefficient {
  int l = 0;
  int m = 0;
  double c = 0.0;
};

/// One ionic state. E is the ionization potential in a.u.
struct Channel {
  std::string label;
  double E = 0.0;
  int parity = 1;  // +1 gerade, -1 ungerade
  double Z = 1.0;
  std::vector<StructureCoefficient> clm;
  std::optional<std::string> partner;

  double kappa() const;
  int max_l() const;
  void validate() const;
};

/// Transition dipole between channels i and j in the molecular frame (a.u.);
/// the j -> i element is the complex conjugate.
struct DipoleCoupling {
  std::size_t i = 0, j = 0;
  Eigen::Vector3cd d = Eigen::Vector3cd::Zero();
};

/// Reference Keldysh numbers tabulated together with a molecule.
struct KeldyshReference {
  double wavelength_nm = 0.0;
  double intensity_W_cm2 = 0.0;
  std::vector<std::string> labels;
  std::vector<double> gamma_K;
  std::vector<double> F0_over_kappa3;
};

class MoleculeModel {
 public:
  MoleculeModel() = default;
  MoleculeModel(std::string name, std::vector<Channel> channels,
                std::vector<DipoleCoupling> dipoles, double theta = 0.0);

  const std::string& name() const { return name_; }
  std::size_t size() const { return channels_.size(); }
  const std::vector<Channel>& channels() const { return channels_; }
  const Channel& channel(std::size_t i) const { return channels_.at(i); }
  std::size_t index_of(const std::string& label) const;
  const std::vector<DipoleCoupling>& dipoles() const { return dipoles_; }

  const EulerAngles& orientation() const { return euler_; }
  double theta() const { return euler_.beta; }
  /// Euler angles (0, theta, 0).
  void set_theta(double theta);
  MoleculeModel with_theta(double theta) const;

  /// Dipole matrix projected on the lab z axis (laser polarization).
  const Eigen::MatrixXcd& lab_dipole_z() const { return dz_lab_; }

  /// Structure amplitude B_0 of every channel for a field of the given sign.
  const Eigen::VectorXcd& b0(int field_sign) const { return field_sign >= 0 ? b_pos_ : b_neg_; }

  Eigen::VectorXd energies() const;

  std::optional<KeldyshReference> reference;

 private:
  void refresh();

  std::string name_;
  std::vector<Channel> channels_;
  std::vector<DipoleCoupling> dipoles_;
  EulerAngles euler_;
  Eigen::MatrixXcd dz_lab_;
  Eigen::VectorXcd b_pos_, b_neg_;
};

/// B_m = sum_{l m'} sgn(-F)^(l-m) C_{lm'} D^l_{m m'}(R) Q(l, m).
std::complex<double> rotate_Bm(const Channel& ch, const EulerAngles& euler, int field_sign,
                               int m = 0);
std::complex<double> rotate_Bm(const Channel& ch, const specialfn::WignerRotation& rot,
                               int field_sign, int m = 0);

/// H_ii = E_i, H_ij = -d_ij . F(t) with the laser along lab z.
Eigen::MatrixXcd hamiltonian_at(const MoleculeModel& model, const LaserField& field, double t);
Eigen::MatrixXcd hamiltonian_at(const MoleculeModel& model, double field_value);

// Molecule files are JSON; see data/molecules/*.json.
MoleculeModel load_molecule_file(const std::string& path);
MoleculeModel molecule_from_json_text(const std::string& text, const std::string& origin = "");
/// A bundled name (h, n2, co2) or a path to a JSON file.
MoleculeModel load_molecule(const std::string& name_or_path);
std::vector<std::string> bundled_molecules();
/// DMSFI_DATA_DIR if set, else the compiled-in data directory.
std::string data_dir();

}  // namespace dmsfi

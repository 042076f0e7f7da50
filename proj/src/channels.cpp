#include "dmsfi/channels.hpp"

#include "dmsfi/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#ifndef DMSFI_DATA_DIR
#define DMSFI_DATA_DIR "data"
#endif

namespace dmsfi {

using json = nlohmann::json;

double Channel::kappa() const { return std::sqrt(2.0 * E); }

int Channel::max_l() const {
  int l = 0;
  for (const auto& c : clm) l = std::max(l, c.l);
  return l;
}

void Channel::validate() const {
  if (!(E > 0.0)) throw std::invalid_argument("channel '" + label + "': E must be > 0");
  if (parity != 1 && parity != -1)
    throw std::invalid_argument("channel '" + label + "': parity must be +1 or -1");
  bool any = false;
  for (const auto& c : clm) {
    if (c.l < 0 || std::abs(c.m) > c.l)
      throw std::invalid_argument("channel '" + label + "': bad (l, m) in C_lm");
    any = any || c.c != 0.0;
  }
  if (!any) throw std::invalid_argument("channel '" + label + "': needs a nonzero C_lm");
}

std::complex<double> rotate_Bm(const Channel& ch, const specialfn::WignerRotation& rot,
                               int field_sign, int m) {
  // sgn(-F) is -1 for a positive field
  const double s = field_sign > 0 ? -1.0 : 1.0;
  std::complex<double> b = 0.0;
  for (const auto& c : ch.clm) {
    if (std::abs(m) > c.l) continue;
    const double sgn = (c.l - m) % 2 == 0 ? 1.0 : s;
    b += sgn * c.c * rot.element(c.l, m, c.m) * specialfn::Q_factor(c.l, m);
  }
  return b;
}

std::complex<double> rotate_Bm(const Channel& ch, const EulerAngles& euler, int field_sign, int m) {
  return rotate_Bm(ch, specialfn::WignerRotation(euler, ch.max_l()), field_sign, m);
}

MoleculeModel::MoleculeModel(std::string name, std::vector<Channel> channels,
                             std::vector<DipoleCoupling> dipoles, double theta)
    : name_(std::move(name)), channels_(std::move(channels)), dipoles_(std::move(dipoles)) {
  std::set<std::string> seen;
  for (const auto& c : channels_) {
    c.validate();
    if (!seen.insert(c.label).second) throw std::invalid_argument("duplicate channel " + c.label);
  }
  for (const auto& d : dipoles_)
    if (d.i >= channels_.size() || d.j >= channels_.size() || d.i == d.j)
      throw std::invalid_argument("dipole coupling indices out of range");
  euler_.beta = theta;
  refresh();
}

std::size_t MoleculeModel::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < channels_.size(); ++i)
    if (channels_[i].label == label) return i;
  throw std::out_of_range("no channel '" + label + "' in " + name_);
}

void MoleculeModel::set_theta(double theta) {
  euler_ = EulerAngles{0.0, theta, 0.0};
  refresh();
}

MoleculeModel MoleculeModel::with_theta(double theta) const {
  MoleculeModel m = *this;
  m.set_theta(theta);
  return m;
}

Eigen::VectorXd MoleculeModel::energies() const {
  Eigen::VectorXd e(channels_.size());
  for (std::size_t i = 0; i < channels_.size(); ++i) e[i] = channels_[i].E;
  return e;
}

void MoleculeModel::refresh() {
  const std::size_t n = channels_.size();
  const Eigen::Matrix3d R = specialfn::rotation_matrix(euler_);
  dz_lab_ = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& d : dipoles_) {
    const std::complex<double> z = R(2, 0) * d.d[0] + R(2, 1) * d.d[1] + R(2, 2) * d.d[2];
    dz_lab_(d.i, d.j) = z;
    dz_lab_(d.j, d.i) = std::conj(z);
  }
  int lmax = 0;
  for (const auto& c : channels_) lmax = std::max(lmax, c.max_l());
  const specialfn::WignerRotation rot(euler_, lmax);
  b_pos_.resize(n);
  b_neg_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b_pos_[i] = rotate_Bm(channels_[i], rot, +1);
    b_neg_[i] = rotate_Bm(channels_[i], rot, -1);
  }
}

Eigen::MatrixXcd hamiltonian_at(const MoleculeModel& model, double field_value) {
  Eigen::MatrixXcd H = -field_value * model.lab_dipole_z();
  for (std::size_t i = 0; i < model.size(); ++i) H(i, i) += model.channel(i).E;
  return H;
}

Eigen::MatrixXcd hamiltonian_at(const MoleculeModel& model, const LaserField& field, double t) {
  return hamiltonian_at(model, field.field_at(t));
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
}

Channel channel_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"label", "E_eV", "parity", "Z", "Clm", "partner", "orbital"}, where);
  Channel c;
  c.label = j.at("label").get<std::string>();
  c.E = units::ev_to_au(j.at("E_eV").get<double>());
  c.parity = j.value("parity", 1);
  c.Z = j.value("Z", 1.0);
  for (const auto& e : j.at("Clm")) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument(where + ": Clm entries are [l, m, value]");
    c.clm.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  if (j.contains("partner") && !j["partner"].is_null()) c.partner = j["partner"].get<std::string>();
  return c;
}

}  // namespace

MoleculeModel molecule_from_json_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  reject_unknown(j, {"name", "channels", "dipoles", "neglected_dipoles", "reference", "notes"},
                 origin);
  std::vector<Channel> chans;
  for (std::size_t k = 0; k < j.at("channels").size(); ++k)
    chans.push_back(channel_from_json(j["channels"][k], origin + ": channels[" + std::to_string(k) + "]"));
  auto index = [&](const std::string& label) -> std::size_t {
    for (std::size_t i = 0; i < chans.size(); ++i)
      if (chans[i].label == label) return i;
    throw std::invalid_argument(origin + ": dipole refers to unknown channel '" + label + "'");
  };
  std::vector<DipoleCoupling> dips;
  if (j.contains("dipoles")) {
    for (const auto& d : j["dipoles"]) {
      reject_unknown(d, {"from", "to", "d_au", "d_imag_au"}, origin + ": dipole");
      DipoleCoupling c;
      c.i = index(d.at("from").get<std::string>());
      c.j = index(d.at("to").get<std::string>());
      const auto re = d.at("d_au").get<std::vector<double>>();
      if (re.size() != 3) throw std::invalid_argument(origin + ": d_au must have 3 components");
      std::vector<double> im(3, 0.0);
      if (d.contains("d_imag_au")) im = d["d_imag_au"].get<std::vector<double>>();
      for (int k = 0; k < 3; ++k) c.d[k] = {re[k], im.at(k)};
      dips.push_back(c);
    }
  }
  MoleculeModel m(j.value("name", std::string("molecule")), std::move(chans), std::move(dips));
  if (j.contains("reference")) {
    const auto& r = j["reference"];
    reject_unknown(r, {"wavelength_nm", "intensity_W_cm2", "gamma_K", "F0_over_kappa3"},
                   origin + ": reference");
    KeldyshReference ref;
    ref.wavelength_nm = r.at("wavelength_nm").get<double>();
    ref.intensity_W_cm2 = r.at("intensity_W_cm2").get<double>();
    for (auto it = r.at("gamma_K").begin(); it != r.at("gamma_K").end(); ++it) {
      ref.labels.push_back(it.key());
      ref.gamma_K.push_back(it.value().get<double>());
      ref.F0_over_kappa3.push_back(r.at("F0_over_kappa3").at(it.key()).get<double>());
    }
    m.reference = ref;
  }
  return m;
}

MoleculeModel load_molecule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open molecule file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return molecule_from_json_text(ss.str(), path);
}

std::string data_dir() {
  if (const char* env = std::getenv("DMSFI_DATA_DIR"); env && *env) return env;
  return DMSFI_DATA_DIR;
}

std::vector<std::string> bundled_molecules() {
  std::vector<std::string> out;
  const std::filesystem::path dir = std::filesystem::path(data_dir()) / "molecules";
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

MoleculeModel load_molecule(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path) && std::filesystem::is_regular_file(name_or_path))
    return load_molecule_file(name_or_path);
  std::string lower = name_or_path;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  const auto p = std::filesystem::path(data_dir()) / "molecules" / (lower + ".json");
  if (!std::filesystem::exists(p))
    throw std::runtime_error("unknown molecule '" + name_or_path + "' (looked in " +
                             p.parent_path().string() + ")");
  return load_molecule_file(p.string());
}

}  // namespace dmsfi

#include "dmsfi/scenario.hpp"

#include "dmsfi/units.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef DMSFI_VERSION
#define DMSFI_VERSION "unknown"
#endif

namespace dmsfi::scenario {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string version_string() { return DMSFI_VERSION; }

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw SchemaError(where.empty() ? it.key() : where + "." + it.key(),
                        "unknown key (allowed: " + list + ")");
    }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where.empty() ? key : where + "." + key, e.what());
  }
}

template <class T, class Parse>
std::vector<T> one_or_many(const json& j, const std::string& key, Parse parse) {
  std::vector<T> out;
  try {
    if (j.at(key).is_array())
      for (const auto& v : j.at(key)) out.push_back(parse(v.get<std::string>()));
    else
      out.push_back(parse(j.at(key).get<std::string>()));
  } catch (const json::exception& e) {
    throw SchemaError(key, e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(key, e.what());
  }
  if (out.empty()) throw SchemaError(key, "must not be empty");
  return out;
}

std::string sweep_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::Wavelength: return "wavelength_nm";
    case SweepVariable::Intensity: return "intensity_W_cm2";
    case SweepVariable::Angle: return "angle_deg";
  }
  return "?";
}

int line_of_key(const std::string& text, const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string key = "\"" + (dot == std::string::npos ? path : path.substr(dot + 1)) + "\"";
  const auto pos = text.find(key);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

}  // namespace

Scenario parse_scenario(const json& j) {
  reject_unknown(j,
                 {"name", "molecule", "laser", "orientation_deg", "variant", "rate", "phase",
                  "neutral_population", "integrator", "sweep", "output", "normalized_difference"},
                 "");
  Scenario s;
  s.source = j;
  if (j.contains("name")) s.name = get<std::string>(j, "name", "");
  if (j.contains("molecule")) s.molecule = get<std::string>(j, "molecule", "");
  if (!j.contains("laser")) throw SchemaError("laser", "required section missing");
  const auto& L = j["laser"];
  reject_unknown(L, {"wavelength_nm", "intensity_W_cm2", "fwhm_fs", "envelope", "cep_rad", "fwhm_of"},
                 "laser");
  s.laser.wavelength_nm = get<double>(L, "wavelength_nm", "laser");
  s.laser.intensity_W_cm2 = get<double>(L, "intensity_W_cm2", "laser");
  if (L.contains("fwhm_fs")) s.laser.fwhm_fs = get<double>(L, "fwhm_fs", "laser");
  if (L.contains("cep_rad")) s.laser.cep_rad = get<double>(L, "cep_rad", "laser");
  try {
    if (L.contains("envelope")) s.laser.envelope = parse_envelope(get<std::string>(L, "envelope", "laser"));
    if (L.contains("fwhm_of")) s.laser.fwhm_of = parse_fwhm_of(get<std::string>(L, "fwhm_of", "laser"));
    LaserField check(s.laser);
  } catch (const std::invalid_argument& e) {
    throw SchemaError("laser", e.what());
  }
  if (j.contains("orientation_deg")) {
    const auto& o = j["orientation_deg"];
    s.orientation_deg = o.is_array() ? get<std::vector<double>>(j, "orientation_deg", "")
                                     : std::vector<double>{get<double>(j, "orientation_deg", "")};
    if (s.orientation_deg.empty()) throw SchemaError("orientation_deg", "must not be empty");
  }
  if (j.contains("variant")) s.variants = one_or_many<ModelVariant>(j, "variant", parse_variant);
  if (j.contains("rate")) s.rates = one_or_many<RateKind>(j, "rate", parse_rate_kind);
  if (j.contains("phase")) s.phases = one_or_many<PhaseConvention>(j, "phase", parse_phase_convention);
  if (j.contains("neutral_population")) {
    const auto v = get<std::string>(j, "neutral_population", "");
    if (v == "co-integrated") s.neutral = NeutralPopulation::CoIntegrated;
    else if (v == "interpolated") s.neutral = NeutralPopulation::Interpolated;
    else throw SchemaError("neutral_population", "expected co-integrated or interpolated");
  }
  if (j.contains("integrator")) {
    const auto& I = j["integrator"];
    reject_unknown(I, {"rtol", "atol", "max_step_fs", "output_step_as"}, "integrator");
    if (I.contains("rtol")) s.rtol = get<double>(I, "rtol", "integrator");
    if (I.contains("atol")) s.atol = get<double>(I, "atol", "integrator");
    if (I.contains("max_step_fs")) s.max_step_fs = get<double>(I, "max_step_fs", "integrator");
    if (I.contains("output_step_as")) s.output_step_as = get<double>(I, "output_step_as", "integrator");
    if (!(s.rtol > 0 && s.atol > 0 && s.max_step_fs > 0 && s.output_step_as > 0))
      throw SchemaError("integrator", "tolerances and steps must be positive");
  }
  if (j.contains("sweep") && !j["sweep"].is_null()) {
    const auto& S = j["sweep"];
    reject_unknown(S, {"variable", "values"}, "sweep");
    Sweep sw;
    const auto var = get<std::string>(S, "variable", "sweep");
    if (var == "wavelength_nm") sw.variable = SweepVariable::Wavelength;
    else if (var == "intensity_W_cm2") sw.variable = SweepVariable::Intensity;
    else if (var == "angle_deg") sw.variable = SweepVariable::Angle;
    else throw SchemaError("sweep.variable", "expected wavelength_nm, intensity_W_cm2 or angle_deg");
    sw.values = get<std::vector<double>>(S, "values", "sweep");
    if (!sw.values.empty()) s.sweep = sw;  // empty sweep means a single run
  }
  if (j.contains("output")) {
    reject_unknown(j["output"], {"time_series"}, "output");
    if (j["output"].contains("time_series")) s.time_series = get<bool>(j["output"], "time_series", "output");
  }
  if (j.contains("normalized_difference")) {
    const auto& N = j["normalized_difference"];
    reject_unknown(N, {"plus", "minus"}, "normalized_difference");
    s.normalized_difference = std::make_pair(get<std::string>(N, "plus", "normalized_difference"),
                                              get<std::string>(N, "minus", "normalized_difference"));
  }
  return s;
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(origin, e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const SchemaError& e) {
    const int line = line_of_key(text, e.where());
    throw SchemaError(origin + (line ? ":" + std::to_string(line) : ""), e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["molecule"] = s.molecule;
  j["laser"] = {{"wavelength_nm", s.laser.wavelength_nm},
                {"intensity_W_cm2", s.laser.intensity_W_cm2},
                {"fwhm_fs", s.laser.fwhm_fs},
                {"envelope", to_string(s.laser.envelope)},
                {"cep_rad", s.laser.cep_rad},
                {"fwhm_of", to_string(s.laser.fwhm_of)}};
  j["orientation_deg"] = s.orientation_deg;
  for (auto v : s.variants) j["variant"].push_back(to_string(v));
  for (auto r : s.rates) j["rate"].push_back(to_string(r));
  for (auto p : s.phases) j["phase"].push_back(to_string(p));
  j["neutral_population"] = s.neutral == NeutralPopulation::CoIntegrated ? "co-integrated" : "interpolated";
  j["integrator"] = {{"rtol", s.rtol},
                     {"atol", s.atol},
                     {"max_step_fs", s.max_step_fs},
                     {"output_step_as", s.output_step_as}};
  if (s.sweep) j["sweep"] = {{"variable", sweep_name(s.sweep->variable)}, {"values", s.sweep->values}};
  j["output"] = {{"time_series", s.time_series}};
  if (s.normalized_difference)
    j["normalized_difference"] = {{"plus", s.normalized_difference->first},
                                  {"minus", s.normalized_difference->second}};
  return j;
}

std::vector<RunSpec> expand(const Scenario& s) {
  std::vector<double> sweep_vals{std::numeric_limits<double>::quiet_NaN()};
  if (s.sweep) sweep_vals = s.sweep->values;
  std::vector<RunSpec> out;
  for (double sv : sweep_vals) {
    LaserParams lp = s.laser;
    std::vector<double> angles = s.orientation_deg;
    if (s.sweep) {
      switch (s.sweep->variable) {
        case SweepVariable::Wavelength: lp.wavelength_nm = sv; break;
        case SweepVariable::Intensity: lp.intensity_W_cm2 = sv; break;
        case SweepVariable::Angle: angles = {sv}; break;
      }
    }
    for (double th : angles)
      for (auto v : s.variants)
        for (auto r : s.rates)
          for (auto p : s.phases) {
            RunSpec rs;
            rs.theta_deg = th;
            rs.laser = lp;
            rs.options.variant = v;
            rs.options.rate = r;
            rs.options.phase = p;
            rs.options.neutral = s.neutral;
            rs.options.rtol = s.rtol;
            rs.options.atol = s.atol;
            rs.options.max_step_fs = s.max_step_fs;
            rs.options.output_step_as = s.output_step_as;
            char id[160];
            std::snprintf(id, sizeof id, "r%03zu_th%g_l%g_I%g_%s_%s_%s", out.size(), th,
                          lp.wavelength_nm, lp.intensity_W_cm2, to_string(v).c_str(),
                          to_string(r).c_str(), to_string(p).c_str());
            rs.id = id;
            out.push_back(rs);
          }
  }
  return out;
}

std::vector<RunOutcome> run_all(const Scenario& s, const MoleculeModel& molecule, int threads,
                                bool keep_series) {
  const auto specs = expand(s);
  std::vector<RunOutcome> out(specs.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const long n = static_cast<long>(specs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (long k = 0; k < n; ++k) {
    auto& o = out[k];
    o.spec = specs[k];
    try {
      const LaserField field(o.spec.laser);
      const auto mol = molecule.with_theta(o.spec.theta_deg * units::kPi / 180.0);
      o.result = propagate(mol, field, o.spec.options);
      if (!keep_series) {
        auto& r = o.result;
        r.t = {r.t.back()};
        r.field = {r.field.back()};
        r.rho0 = {r.rho0.back()};
        r.rho = {r.rho.back()};
      }
      o.ok = true;
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
    }
  }
  return out;
}

double normalized_difference(const SimulationResult& r, const std::string& plus,
                             const std::string& minus) {
  const auto& g = r.summary.group_populations;
  const double total = r.summary.yield;
  if (!(total > 0.0)) return 0.0;
  return (g.at(plus) - g.at(minus)) / total;
}

namespace {

std::vector<std::string> group_names(const std::vector<std::string>& labels) {
  std::vector<std::string> g;
  for (const auto& l : labels) {
    const auto name = group_of(l);
    if (name != l && std::find(g.begin(), g.end(), name) == g.end()) g.push_back(name);
  }
  return g;
}

}  // namespace

std::string summary_table_csv(const Scenario& s, const std::vector<RunOutcome>& runs) {
  std::ostringstream os;
  std::vector<std::string> labels;
  for (const auto& r : runs)
    if (r.ok) {
      labels = r.result.labels;
      break;
    }
  const auto groups = group_names(labels);
  os << "id,status,theta_deg,wavelength_nm,intensity_W_cm2,fwhm_fs,variant,rate,phase,yield";
  for (const auto& l : labels) os << ",pop_" << l;
  for (const auto& g : groups) os << ",pop_" << g;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      os << ",maxcoh_" << labels[i] << "_" << labels[j] << ",endcoh_" << labels[i] << "_" << labels[j];
  if (s.normalized_difference) os << ",normdiff_" << s.normalized_difference->first << "_" << s.normalized_difference->second;
  os << "\n";
  for (const auto& r : runs) {
    const auto& sp = r.spec;
    os << sp.id << "," << (r.ok ? "ok" : "error") << "," << num(sp.theta_deg) << ","
       << num(sp.laser.wavelength_nm) << "," << num(sp.laser.intensity_W_cm2) << ","
       << num(sp.laser.fwhm_fs) << "," << to_string(sp.options.variant) << ","
       << to_string(sp.options.rate) << "," << to_string(sp.options.phase);
    if (!r.ok) {
      os << ",\"" << r.error << "\"\n";
      continue;
    }
    const auto& sm = r.result.summary;
    os << "," << num(sm.yield);
    for (Eigen::Index i = 0; i < sm.final_populations.size(); ++i) os << "," << num(sm.final_populations[i]);
    for (const auto& g : groups) os << "," << num(sm.group_populations.at(g));
    for (const auto& c : sm.coherences) os << "," << num(c.max_abs) << "," << num(c.final_abs);
    if (s.normalized_difference)
      os << "," << num(normalized_difference(r.result, s.normalized_difference->first,
                                             s.normalized_difference->second));
    os << "\n";
  }
  return os.str();
}

std::string time_series_csv(const SimulationResult& r) {
  std::ostringstream os;
  const std::size_t n = r.labels.size();
  os << "t_fs,F_au,rho0";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      os << ",re_" << r.labels[i] << "_" << r.labels[j] << ",im_" << r.labels[i] << "_" << r.labels[j];
  os << "\n";
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    os << num(units::au_to_fs(r.t[k])) << "," << num(r.field[k]) << "," << num(r.rho0[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        os << "," << num(r.rho[k](i, j).real()) << "," << num(r.rho[k](i, j).imag());
    os << "\n";
  }
  return os.str();
}

json summary_json(const Scenario& s, const std::vector<RunOutcome>& runs) {
  json j;
  j["scenario"] = s.name;
  j["runs"] = json::array();
  for (const auto& r : runs) {
    json e;
    e["id"] = r.spec.id;
    e["theta_deg"] = r.spec.theta_deg;
    e["wavelength_nm"] = r.spec.laser.wavelength_nm;
    e["intensity_W_cm2"] = r.spec.laser.intensity_W_cm2;
    e["variant"] = to_string(r.spec.options.variant);
    e["rate"] = to_string(r.spec.options.rate);
    e["phase"] = to_string(r.spec.options.phase);
    if (!r.ok) {
      e["status"] = "error";
      e["error"] = r.error;
      j["runs"].push_back(e);
      continue;
    }
    e["status"] = "ok";
    const auto& sm = r.result.summary;
    const auto& L = r.result.labels;
    for (std::size_t i = 0; i < L.size(); ++i) e["final_populations"][L[i]] = sm.final_populations[i];
    for (const auto& [g, v] : sm.group_populations) e["group_populations"][g] = v;
    for (const auto& c : sm.coherences)
      e["coherences"].push_back({{"pair", L[c.i] + "|" + L[c.j]}, {"max_abs", c.max_abs}, {"final_abs", c.final_abs}});
    e["yield"] = sm.yield;
    e["max_trace_error"] = sm.max_trace_error;
    e["max_hermiticity_error"] = sm.max_hermiticity_error;
    e["steps"] = {{"accepted", sm.stats.accepted}, {"rejected", sm.stats.rejected}};
    if (s.normalized_difference)
      e["normalized_difference"] =
          normalized_difference(r.result, s.normalized_difference->first, s.normalized_difference->second);
    j["runs"].push_back(e);
  }
  return j;
}

namespace {

json molecule_json(const MoleculeModel& m) {
  json j;
  j["name"] = m.name();
  for (const auto& c : m.channels()) {
    json e{{"label", c.label}, {"E_eV", units::au_to_ev(c.E)}, {"parity", c.parity}, {"Z", c.Z}};
    for (const auto& x : c.clm) e["Clm"].push_back({x.l, x.m, x.c});
    j["channels"].push_back(e);
  }
  j["dipoles"] = json::array();
  for (const auto& d : m.dipoles())
    j["dipoles"].push_back({{"from", m.channel(d.i).label},
                            {"to", m.channel(d.j).label},
                            {"d_au", {d.d[0].real(), d.d[1].real(), d.d[2].real()}},
                            {"d_imag_au", {d.d[0].imag(), d.d[1].imag(), d.d[2].imag()}}});
  return j;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

Bundle run_scenario(const Scenario& s, const std::string& out_dir, int threads) {
  const MoleculeModel mol = load_molecule(s.molecule);
  Bundle b;
  b.out_dir = out_dir;
  fs::create_directories(out_dir);
  b.runs = run_all(s, mol, threads, s.time_series);
  write_file(fs::path(out_dir) / "table.csv", summary_table_csv(s, b.runs));
  b.files.push_back("table.csv");
  write_file(fs::path(out_dir) / "summary.json", summary_json(s, b.runs).dump(2) + "\n");
  b.files.push_back("summary.json");
  if (s.time_series) {
    fs::create_directories(fs::path(out_dir) / "series");
    for (const auto& r : b.runs) {
      if (!r.ok) continue;
      const std::string name = "series/" + r.spec.id + ".csv";
      write_file(fs::path(out_dir) / name, time_series_csv(r.result));
      b.files.push_back(name);
    }
  }
  json man;
  man["code_version"] = version_string();
  man["config"] = to_json(s);
  man["molecule"] = molecule_json(mol);
  man["files"] = b.files;
  for (const auto& r : b.runs) man["runs"].push_back(r.spec.id);
  write_file(fs::path(out_dir) / "manifest.json", man.dump(2) + "\n");
  b.files.push_back("manifest.json");
  return b;
}

Bundle run_scenario(const std::string& config_path, const std::string& out_dir, int threads) {
  return run_scenario(load_scenario(config_path), out_dir, threads);
}

}  // namespace dmsfi::scenario

#pragma once

#include "dmsfi/dmsfi.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmsfi::scenario {

/// Config problem, carrying the offending key path (and line when known).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class SweepVariable { Wavelength, Intensity, Angle };

struct Sweep {
  SweepVariable variable = SweepVariable::Angle;
  std::vector<double> values;  // nm, W/cm^2 or degrees
};

struct Scenario {
  std::string name = "scenario";
  std::string molecule = "n2";
  LaserParams laser;
  std::vector<double> orientation_deg{0.0};
  std::vector<ModelVariant> variants{ModelVariant::TIC1};
  std::vector<RateKind> rates{RateKind::Nonadiabatic};
  std::vector<PhaseConvention> phases{PhaseConvention::Plain};
  NeutralPopulation neutral = NeutralPopulation::CoIntegrated;
  double rtol = 1e-8, atol = 1e-10, max_step_fs = 0.1, output_step_as = 10.0;
  std::optional<Sweep> sweep;
  bool time_series = true;
  /// (plus - minus) / yield column, e.g. C and B groups.
  std::optional<std::pair<std::string, std::string>> normalized_difference;
  nlohmann::json source;  // config as read
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "config");
Scenario load_scenario(const std::string& path);
/// Fully resolved config (defaults filled in) as JSON.
nlohmann::json to_json(const Scenario& s);

/// One propagation of the scenario's cartesian product.
struct RunSpec {
  std::string id;
  double theta_deg = 0.0;
  LaserParams laser;
  PropagationOptions options;
};

std::vector<RunSpec> expand(const Scenario& s);

struct RunOutcome {
  RunSpec spec;
  bool ok = false;
  std::string error;
  SimulationResult result;
};

/// Runs every point, in parallel when threads != 1; results keep expansion order.
std::vector<RunOutcome> run_all(const Scenario& s, const MoleculeModel& molecule, int threads = 0,
                                bool keep_series = true);

struct Bundle {
  std::string out_dir;
  std::vector<std::string> files;
  std::vector<RunOutcome> runs;
};

/// Writes table.csv, summary.json, manifest.json and optional per-run
/// time-series CSVs into out_dir. Output is bit-identical for equal inputs.
Bundle run_scenario(const Scenario& s, const std::string& out_dir, int threads = 0);
Bundle run_scenario(const std::string& config_path, const std::string& out_dir, int threads = 0);

/// Table with one row per run in a stable order.
std::string summary_table_csv(const Scenario& s, const std::vector<RunOutcome>& runs);
std::string time_series_csv(const SimulationResult& r);
nlohmann::json summary_json(const Scenario& s, const std::vector<RunOutcome>& runs);

/// Normalized population difference (P_plus - P_minus) / yield of one run.
double normalized_difference(const SimulationResult& r, const std::string& plus,
                             const std::string& minus);

std::string version_string();

}  // namespace dmsfi::scenario

#include "dmsfi/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dmsfi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dmsfi_test_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmall = R"({
  "name": "small",
  "molecule": "n2",
  "laser": {"wavelength_nm": 900, "intensity_W_cm2": 2e14, "fwhm_fs": 3.7, "envelope": "gaussian"},
  "orientation_deg": [30, 60],
  "variant": ["TIC1", "TIC0"]
})";

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("schema errors name the key and the line") {
  SUBCASE("unknown top-level key") {
    const std::string text = "{\n  \"laser\": {\"wavelength_nm\": 800, \"intensity_W_cm2\": 1e14},\n  \"colour\": 3\n}";
    try {
      scenario::parse_scenario_text(text, "cfg.json");
      FAIL("accepted an unknown key");
    } catch (const scenario::SchemaError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("cfg.json:3") != std::string::npos);
      CHECK(msg.find("unknown key") != std::string::npos);
    }
  }
  SUBCASE("unknown nested key") {
    const std::string text = "{\n  \"laser\": {\"wavelength_nm\": 800,\n    \"intensity\": 1e14}\n}";
    try {
      scenario::parse_scenario_text(text, "cfg.json");
      FAIL("accepted an unknown key");
    } catch (const scenario::SchemaError& e) {
      CHECK(std::string(e.what()).find("laser.intensity") != std::string::npos);
      CHECK(std::string(e.what()).find("cfg.json:3") != std::string::npos);
    }
  }
  SUBCASE("bad values") {
    CHECK_THROWS_AS(scenario::parse_scenario_text(R"({"laser": {"wavelength_nm": "red", "intensity_W_cm2": 1e14}})"),
                    scenario::SchemaError);
    CHECK_THROWS_AS(scenario::parse_scenario_text(R"({"laser": {"wavelength_nm": 800, "intensity_W_cm2": 1e14}, "variant": "TIC9"})"),
                    scenario::SchemaError);
    CHECK_THROWS_AS(scenario::parse_scenario_text(R"({"laser": {"wavelength_nm": 800, "intensity_W_cm2": 1e14, "envelope": "gaussian"}})"),
                    scenario::SchemaError);
    CHECK_THROWS_AS(scenario::parse_scenario_text(R"({"molecule": "n2"})"), scenario::SchemaError);
    CHECK_THROWS_AS(scenario::parse_scenario_text("{ not json"), scenario::SchemaError);
    CHECK_THROWS_AS(scenario::parse_scenario_text(R"({"laser": {"wavelength_nm": 800, "intensity_W_cm2": 1e14},
      "sweep": {"variable": "colour", "values": [1]}})"),
                    scenario::SchemaError);
  }
}

TEST_CASE("expansion order is sweep, angle, variant, rate, phase") {
  auto s = scenario::parse_scenario_text(kSmall);
  const auto specs = scenario::expand(s);
  REQUIRE(specs.size() == 4);
  CHECK(specs[0].theta_deg == 30);
  CHECK(specs[0].options.variant == ModelVariant::TIC1);
  CHECK(specs[1].options.variant == ModelVariant::TIC0);
  CHECK(specs[2].theta_deg == 60);
  for (std::size_t k = 0; k < specs.size(); ++k)
    for (std::size_t j = k + 1; j < specs.size(); ++j) CHECK(specs[k].id != specs[j].id);
}

TEST_CASE("empty sweep gives a single point set") {
  auto s = scenario::parse_scenario_text(R"({"molecule": "h",
    "laser": {"wavelength_nm": 800, "intensity_W_cm2": 1e14, "fwhm_fs": 10, "envelope": "cosine-square"},
    "sweep": {"variable": "wavelength_nm", "values": []}})");
  CHECK_FALSE(s.sweep.has_value());
  CHECK(scenario::expand(s).size() == 1);
}

TEST_CASE("sweep rows keep the value order and one row per value") {
  auto s = scenario::parse_scenario_text(R"({"molecule": "h",
    "laser": {"wavelength_nm": 800, "intensity_W_cm2": 1e14, "fwhm_fs": 10, "envelope": "cosine-square"},
    "sweep": {"variable": "intensity_W_cm2", "values": [4e14, 5e13, 2e14, 1e14]},
    "output": {"time_series": false}})");
  const auto runs = scenario::run_all(s, load_molecule("h"), 3, false);
  REQUIRE(runs.size() == 4);
  const double expect[] = {4e14, 5e13, 2e14, 1e14};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(runs[k].ok);
    CHECK(runs[k].spec.laser.intensity_W_cm2 == expect[k]);
  }
  CHECK(runs[0].result.summary.yield > runs[3].result.summary.yield);
  const auto table = scenario::summary_table_csv(s, runs);
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
}

TEST_CASE("a failing sweep point is recorded and the others still run") {
  auto s = scenario::parse_scenario_text(R"({"molecule": "h",
    "laser": {"wavelength_nm": 800, "intensity_W_cm2": 1e14, "fwhm_fs": 10, "envelope": "cosine-square"},
    "sweep": {"variable": "wavelength_nm", "values": [800, -5, 1200]}})");
  const auto runs = scenario::run_all(s, load_molecule("h"), 1, false);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].ok);
  CHECK_FALSE(runs[1].ok);
  CHECK_FALSE(runs[1].error.empty());
  CHECK(runs[2].ok);
  CHECK(scenario::summary_table_csv(s, runs).find(",error,") != std::string::npos);
}

TEST_CASE("single-point sweep equals the plain run") {
  auto plain = scenario::parse_scenario_text(R"({"molecule": "n2", "orientation_deg": 40,
    "laser": {"wavelength_nm": 900, "intensity_W_cm2": 2e14, "fwhm_fs": 3.7, "envelope": "gaussian"}})");
  auto swept = scenario::parse_scenario_text(R"({"molecule": "n2",
    "laser": {"wavelength_nm": 900, "intensity_W_cm2": 2e14, "fwhm_fs": 3.7, "envelope": "gaussian"},
    "sweep": {"variable": "angle_deg", "values": [40]}})");
  const auto a = scenario::run_all(plain, load_molecule("n2"), 1, false);
  const auto b = scenario::run_all(swept, load_molecule("n2"), 1, false);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK((a[0].result.rho.back() - b[0].result.rho.back()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a[0].result.summary.yield == b[0].result.summary.yield);
}

TEST_CASE("outputs are bit-identical across runs and thread counts") {
  const auto s = scenario::parse_scenario_text(kSmall);
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  const auto b1 = scenario::run_scenario(s, d1.string(), 1);
  const auto b2 = scenario::run_scenario(s, d2.string(), 4);
  REQUIRE(b1.files == b2.files);
  for (const auto& f : b1.files) {
    CAPTURE(f);
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("the manifest reproduces the run") {
  const auto s = scenario::parse_scenario_text(kSmall);
  const auto d1 = scratch("man1"), d2 = scratch("man2");
  scenario::run_scenario(s, d1.string(), 1);
  const auto man = nlohmann::json::parse(slurp(d1 / "manifest.json"));
  CHECK(man.contains("code_version"));
  CHECK(man["molecule"]["channels"].size() == 4);
  const auto again = scenario::parse_scenario(man["config"]);
  scenario::run_scenario(again, d2.string(), 1);
  CHECK(slurp(d1 / "table.csv") == slurp(d2 / "table.csv"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("time series columns") {
  const auto s = scenario::parse_scenario_text(R"({"molecule": "co2", "orientation_deg": 30,
    "laser": {"wavelength_nm": 900, "intensity_W_cm2": 2e14, "fwhm_fs": 3.7, "envelope": "gaussian"}})");
  const auto runs = scenario::run_all(s, load_molecule("co2"), 1, true);
  const auto csv = scenario::time_series_csv(runs[0].result);
  const auto header = csv.substr(0, csv.find('\n'));
  CHECK(header.rfind("t_fs,F_au,rho0,", 0) == 0);
  CHECK(header.find("re_X+_A+") != std::string::npos);
  CHECK(header.find("im_B_C") != std::string::npos);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == runs[0].result.t.size() + 1);
}

TEST_CASE("normalized difference column") {
  const auto s = scenario::load_scenario(DMSFI_SOURCE_DIR "/scenarios/co2_scan.json");
  REQUIRE(s.normalized_difference.has_value());
  SimulationResult r;
  r.summary.yield = 0.5;
  r.summary.group_populations = {{"C", 0.3}, {"B", 0.1}};
  CHECK(scenario::normalized_difference(r, "C", "B") == doctest::Approx(0.4));
}

TEST_CASE("angle scan is symmetric about 90 degrees for a parity-pure homonuclear set") {
  // bundled N2 X mixes parities (C30 = 0.06); drop it so the symmetry is exact
  auto mol = nlohmann::json::parse(slurp(DMSFI_SOURCE_DIR "/data/molecules/n2.json"));
  auto& clm = mol["channels"][0]["Clm"];
  clm.erase(clm.size() - 1);
  REQUIRE(clm.size() == 2);
  const auto path = scratch("n2_pure.json");
  std::ofstream(path) << mol.dump();
  auto s = scenario::parse_scenario(nlohmann::json{
      {"molecule", path.string()},
      {"laser", {{"wavelength_nm", 900}, {"intensity_W_cm2", 2e14}, {"fwhm_fs", 3.7}, {"envelope", "gaussian"}}},
      {"output", {{"time_series", false}}},
      {"sweep", {{"variable", "angle_deg"}, {"values", {20, 160, 55, 125}}}}});
  const auto m = load_molecule(path.string());
  const auto runs = scenario::run_all(s, m, 0, false);
  for (std::size_t k = 0; k < runs.size(); k += 2)
    for (std::size_t i = 0; i < m.size(); ++i)
      CHECK(runs[k].result.summary.final_populations[i] ==
            doctest::Approx(runs[k + 1].result.summary.final_populations[i]).epsilon(1e-6));
  fs::remove(path);
}

}

#include <gtest/gtest.h>

#include <sstream>

#include "decohere/app/scenarios.hpp"

using namespace decohere::app;

namespace {

const fs::path kConfigs = fs::path(DECOHERE_SOURCE_DIR) / "configs";

json gas_doc() {
  return json::parse(R"({"scenario": "gas", "parameters": {"m1": 1.0, "m2": 100.0, "dk": 0.01, "k_max": 4.0,
                         "v1": 2.0, "eta": 0.05, "kernel": "heavy_target", "k_values": [1.0]}})");
}

bool has_violation(const std::vector<Violation>& v, const std::string& field, Severity s) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == field && x.severity == s; });
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::path(::testing::TempDir()) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Validate, ShippedExamplesAreClean) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(kConfigs)) {
    if (e.path().extension() != ".json" || e.path().filename() == "schema.json") continue;
    ++n;
    const auto v = validate_config_file(e.path().string());
    EXPECT_TRUE(v.empty()) << e.path() << ": " << to_json(v).dump();
  }
  EXPECT_GE(n, 5u);
}

TEST(Validate, HeavyTargetWithHeavierParticleWarns) {
  auto doc = gas_doc();
  doc["parameters"]["m1"] = 2.0;
  doc["parameters"]["m2"] = 1.0;
  const auto v = validate_config(doc);
  EXPECT_TRUE(has_violation(v, "parameters.m1", Severity::warning));
  EXPECT_FALSE(has_errors(v));
}

TEST(Validate, UnresolvedEtaIsAnError) {
  auto doc = gas_doc();
  doc["parameters"]["eta"] = 0.01;  // energy spacing v1·dk = 0.02
  const auto v = validate_config(doc);
  EXPECT_TRUE(has_violation(v, "parameters.eta", Severity::error));
}

TEST(Validate, SchemaErrorsNameTheField) {
  auto v = validate_config(json::parse(R"({"scenario": "warp"})"));
  EXPECT_TRUE(has_violation(v, "scenario", Severity::error));
  v = validate_config(json::parse(R"({"parameters": {}})"));
  EXPECT_TRUE(has_violation(v, "scenario", Severity::error));
  v = validate_config(json::parse(R"({"scenario": "young", "parameters": {"screen_distance": -1, "colour": 2}})"));
  EXPECT_TRUE(has_violation(v, "parameters.screen_distance", Severity::error));
  EXPECT_TRUE(has_violation(v, "parameters.colour", Severity::warning));
  v = validate_config(json::parse(R"({"scenario": "lindblad", "parameters": {"fixture": "spin", "dt": "small"}})"));
  EXPECT_TRUE(has_violation(v, "parameters.fixture", Severity::error));
  EXPECT_TRUE(has_violation(v, "parameters.dt", Severity::error));
  v = validate_config(json::parse(R"({"scenario": "gas", "parameters": {"targets": [{"weight": 1, "center": 0}]}})"));
  EXPECT_TRUE(has_violation(v, "parameters.targets[0].sigma", Severity::error));
  v = validate_config(json::parse(R"({"scenario": "young", "parameters": {"medium_wavenumber": [10, -0.1]}})"));
  EXPECT_TRUE(has_violation(v, "parameters.medium_wavenumber", Severity::error));
  v = validate_config(json::parse(R"({"scenario": "slab-convergence", "parameters": {"lambdas": [0.01, 0.02, 0.03, 0.05]}})"));
  EXPECT_TRUE(has_violation(v, "parameters.lambdas", Severity::error));
  EXPECT_THROW(load_run_config((kConfigs / "missing.json").string()), ConfigError);
}

TEST(Validate, SchemaIsPublished) {
  const auto s = schema_json();
  for (const auto& name : scenario_names()) EXPECT_TRUE(s["scenarios"].contains(name)) << name;
  EXPECT_EQ(s["scenarios"]["gas"]["eta"]["unit"], "energy");
  EXPECT_EQ(json::parse(slurp(kConfigs / "schema.json")), s);
}

TEST(Run, YoungVacuumReportsFullVisibility) {
  RunConfig c;
  ASSERT_FALSE(has_errors(validate_config(json::parse(R"({"scenario": "young"})"), &c)));
  const auto r = run_scenario(c, fresh_dir("young_vacuum"));
  EXPECT_EQ(r.report["results"]["visibility"], 1.0);
  EXPECT_TRUE(r.report["results"]["vacuum"].get<bool>());
  EXPECT_TRUE(r.report["results"]["oscillation_to_background"].is_null());
}

TEST(Run, ToyAndConvergenceReports) {
  RunConfig c;
  validate_config(json::parse(R"({"scenario": "toy"})"), &c);
  EXPECT_TRUE(run_scenario(c, fresh_dir("toy")).report["results"]["pass"].get<bool>());
  validate_config(json::parse(R"({"scenario": "slab-convergence", "seed": 5})"), &c);
  const auto r = run_scenario(c, fresh_dir("slab"));
  EXPECT_NEAR(r.report["results"]["slope"].get<double>(), 3.0, 0.1);
}

TEST(Run, SameConfigAndSeedAreByteIdentical) {
  for (const char* name : {"lindblad.json", "gas.json", "young.json", "slab-convergence.json"}) {
    const auto c = load_run_config((kConfigs / name).string());
    const auto a = run_scenario(c, fresh_dir(std::string("det_a_") + name));
    const auto b = run_scenario(c, fresh_dir(std::string("det_b_") + name));
    ASSERT_EQ(a.files, b.files);
    for (const auto& f : a.files) EXPECT_EQ(slurp(a.directory / f), slurp(b.directory / f)) << name << '/' << f;
  }
}

TEST(Run, EveryCsvHasUnitHeader) {
  const auto c = load_run_config((kConfigs / "young.json").string());
  const auto r = run_scenario(c, fresh_dir("headers"));
  for (const auto& f : r.files) {
    if (fs::path(f).extension() != ".csv") continue;
    std::ifstream is(r.directory / f);
    std::string header;
    std::getline(is, header);
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) EXPECT_TRUE(col.find('[') != std::string::npos && col.back() == ']') << f << ": " << col;
  }
}

TEST(Run, RunDirectoriesAreUnique) {
  const auto base = fresh_dir("dirs");
  const auto a = make_run_directory(base, "toy");
  const auto b = make_run_directory(base, "toy");
  EXPECT_NE(a, b);
  EXPECT_EQ(a.filename().string().rfind("toy-", 0), 0u);
}

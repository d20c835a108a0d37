// app/config.hpp: run configuration: JSON schema per scenario, defaults and
// dry-run validation (schema plus physics sanity checks, no computation).
#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace decohere::app {

using nlohmann::json;

enum class Severity { error, warning };

struct Violation {
  std::string field;
  Severity severity = Severity::error;
  std::string message;
};

inline json to_json(const std::vector<Violation>& v) {
  json out = json::array();
  for (const auto& x : v)
    out.push_back({{"field", x.field}, {"severity", x.severity == Severity::error ? "error" : "warning"}, {"message", x.message}});
  return out;
}

inline bool has_errors(const std::vector<Violation>& v) {
  for (const auto& x : v)
    if (x.severity == Severity::error) return true;
  return false;
}

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> v)
      : std::runtime_error(summary(v)), violations(std::move(v)) {}
  std::vector<Violation> violations;

 private:
  static std::string summary(const std::vector<Violation>& v) {
    std::string s = "invalid configuration";
    for (const auto& x : v)
      if (x.severity == Severity::error) s += "\n  " + x.field + ": " + x.message;
    return s;
  }
};

enum class FieldType { number, integer, boolean, string, numbers, pair, targets };

inline const char* type_name(FieldType t) {
  switch (t) {
    case FieldType::number: return "number";
    case FieldType::integer: return "integer";
    case FieldType::boolean: return "boolean";
    case FieldType::string: return "string";
    case FieldType::numbers: return "array of numbers";
    case FieldType::pair: return "[re, im]";
    case FieldType::targets: return "array of {weight, center, sigma}";
  }
  return "";
}

struct FieldSpec {
  std::string name;
  FieldType type;
  json fallback;  // null: optional without default
  std::string unit;
  std::string doc;
  double min = -std::numeric_limits<double>::infinity();
  bool positive = false;  // strictly > min
  std::vector<std::string> choices = {};
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> s{"toy", "slab-convergence", "lindblad", "gas", "young"};
  return s;
}

inline const std::vector<FieldSpec>& scenario_schema(const std::string& scenario) {
  using T = FieldType;
  static const std::map<std::string, std::vector<FieldSpec>> table{
      {"toy", {}},
      {"slab-convergence",
       {{"particle_dim", T::integer, 8, "", "particle register dimension", 2},
        {"target_dim", T::integer, 2, "", "dimension of each target", 2},
        {"targets", T::integer, 2, "", "targets per slab, each on two particle sites", 1},
        {"lambdas", T::numbers, json::array({0.01, 0.02, 0.04, 0.1}), "", "couplings, at least 4 spanning a decade", 0, true},
        {"weights", T::numbers, json::array({0.6, 0.4}), "", "ensemble weights on |0> and the uniform superposition", 0}}},
      {"lindblad",
       {{"fixture", T::string, "amplitude_damping", "", "generator to integrate", -INFINITY, false, {"amplitude_damping", "lattice"}},
        {"gamma", T::number, 1.0, "1/time", "amplitude-damping rate", 0, true},
        {"lambda", T::number, 0.2, "", "coupling of the lattice slab", 0, true},
        {"particle_dim", T::integer, 4, "", "lattice particle dimension", 2},
        {"t_final", T::number, 10.0, "time", "integration time", 0, true},
        {"dt", T::number, 1e-3, "time", "RK4 step", 0, true},
        {"save_every", T::integer, 100, "", "steps between saved states", 1},
        {"split", T::boolean, true, "", "also integrate the coherent/mixed split"}}},
      {"gas",
       {{"dimension", T::integer, 1, "", "spatial dimension (1 or 3; kernels need 1)", 1},
        {"potential", T::string, "gaussian", "", "interaction shape", -INFINITY, false, {"contact", "gaussian", "yukawa", "tabulated", "zero"}},
        {"strength", T::number, 0.5, "energy*length^d", "potential strength g or V0"},
        {"range", T::number, 1.0, "length", "potential range", 0, true},
        {"table", T::string, json(), "", "CSV q,re,im for the tabulated potential"},
        {"amplitude", T::string, "first_born", "", "scattering amplitude model", -INFINITY, false, {"first_born", "contact_exact"}},
        {"m1", T::number, 1.0, "mass", "particle mass", 0, true},
        {"m2", T::number, 100.0, "mass", "target mass", 0, true},
        {"density", T::number, 1e-3, "1/length^d", "target number density n", 0, true},
        {"v1", T::number, 2.0, "length/time", "particle speed", 0, true},
        {"dk", T::number, 0.01, "1/length", "momentum lattice spacing", 0, true},
        {"k_max", T::number, 6.0, "1/length", "momentum lattice half width", 0, true},
        {"eta", T::number, 0.05, "energy", "Lorentzian width of the energy delta", 0, true},
        {"limit", T::string, "heavy_target", "", "mass limit of the refraction index", -INFINITY, false, {"heavy_target", "heavy_particle"}},
        {"order", T::integer, 0, "", "expansion order in the mass ratio (0 or 1)", 0},
        {"k_values", T::numbers, json::array({1.0, 2.0, 3.0}), "1/length", "momenta for the refraction table (on the lattice)"},
        {"targets", T::targets, json(), "1/length", "target momentum distributions; omitted means at rest"},
        {"kernel", T::string, "none", "", "momentum kernel to assemble", -INFINITY, false, {"none", "heavy_target", "heavy_particle", "recoil"}},
        {"k0", T::number, 2.0, "1/length", "mean momentum of the population used for the kernel drift"},
        {"sigma", T::number, 0.3, "1/length", "momentum spread of that population", 0, true}}},
      {"young",
       {{"slit_separation", T::number, 1.0, "length", "slit separation D", 0, true},
        {"screen_distance", T::number, 1000.0, "length", "screen distance L (medium thickness)", 0, true},
        {"wavenumber", T::number, 10.0, "1/length", "vacuum wavenumber k", 0, true},
        {"medium_wavenumber", T::pair, json(), "1/length", "complex k' as [re, im]; default [k, attenuation/L]"},
        {"attenuation", T::number, json(), "", "Im(k')*L when medium_wavenumber is absent (default 0)", 0},
        {"cells_per_period", T::integer, 64, "", "screen cells per fringe", 8},
        {"window_periods", T::number, 10.0, "", "background window in fringe periods", 0, true},
        {"screen_periods", T::number, 10.0, "", "screen width in fringe periods", 0, true},
        {"crossed_terms", T::boolean, false, "", "also run the crossed-term checks on a position register"},
        {"sites", T::integer, 48, "", "position register size", 8},
        {"packet_width", T::number, 1.0, "sites", "wave-packet width", 0, true},
        {"target_range", T::number, 1.0, "sites", "target interaction range", 0, true},
        {"target_stride", T::number, 2.0, "sites", "distance between neighbouring targets", 0, true},
        {"t_final", T::number, 2.0, "time", "split-evolution time", 0, true},
        {"dt", T::number, 0.02, "time", "split-evolution step", 0, true}}},
  };
  const auto it = table.find(scenario);
  if (it == table.end()) throw std::invalid_argument("unknown scenario " + scenario);
  return it->second;
}

/// Machine-readable schema of every scenario.
inline json schema_json() {
  json out = {{"format", "JSON object with scenario, seed, output_dir and a parameters object"},
              {"top_level",
               {{"scenario", {{"type", "string"}, {"required", true}, {"choices", scenario_names()}}},
                {"seed", {{"type", "integer"}, {"default", 1}}},
                {"output_dir", {{"type", "string"}, {"default", "."}}},
                {"parameters", {{"type", "object"}, {"default", json::object()}}}}}};
  for (const auto& s : scenario_names()) {
    json fields = json::object();
    for (const auto& f : scenario_schema(s)) {
      json d = {{"type", type_name(f.type)}, {"doc", f.doc}};
      if (!f.fallback.is_null()) d["default"] = f.fallback;
      if (!f.unit.empty()) d["unit"] = f.unit;
      if (std::isfinite(f.min)) d[f.positive ? "exclusive_minimum" : "minimum"] = f.min;
      if (!f.choices.empty()) d["choices"] = f.choices;
      fields[f.name] = d;
    }
    out["scenarios"][s] = fields;
  }
  return out;
}

struct RunConfig {
  std::string scenario;
  json parameters = json::object();  // defaults filled in
  std::string output_dir = ".";
  std::uint64_t seed = 1;

  double num(const std::string& k) const { return parameters.at(k).get<double>(); }
  long integer(const std::string& k) const { return parameters.at(k).get<long>(); }
  std::string str(const std::string& k) const { return parameters.at(k).get<std::string>(); }
  bool flag(const std::string& k) const { return parameters.at(k).get<bool>(); }
  bool has(const std::string& k) const { return parameters.contains(k) && !parameters.at(k).is_null(); }
  std::vector<double> numbers(const std::string& k) const { return parameters.at(k).get<std::vector<double>>(); }
};

namespace detail {

inline bool check_value(const FieldSpec& f, const json& v, const std::string& path, std::vector<Violation>& out) {
  auto bad = [&](const std::string& m) {
    out.push_back({path, Severity::error, m});
    return false;
  };
  auto bounded = [&](double x, const std::string& where) {
    if (!std::isfinite(x)) return bad(where + "must be finite");
    if (f.positive ? !(x > f.min) : x < f.min)
      return bad(where + "must be " + (f.positive ? "> " : ">= ") + json(f.min).dump());
    return true;
  };
  switch (f.type) {
    case FieldType::number:
      if (!v.is_number()) return bad("expected a number");
      return bounded(v.get<double>(), "");
    case FieldType::integer:
      if (!v.is_number_integer()) return bad("expected an integer");
      return bounded(double(v.get<long>()), "");
    case FieldType::boolean:
      if (!v.is_boolean()) return bad("expected true or false");
      return true;
    case FieldType::string:
      if (!v.is_string()) return bad("expected a string");
      if (!f.choices.empty() && std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end())
        return bad("must be one of " + json(f.choices).dump());
      return true;
    case FieldType::numbers:
      if (!v.is_array() || v.empty()) return bad("expected a non-empty array of numbers");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) return bad("element " + std::to_string(i) + " is not a number");
        if (!bounded(v[i].get<double>(), "element " + std::to_string(i) + " ")) return false;
      }
      return true;
    case FieldType::pair:
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) return bad("expected [re, im]");
      return true;
    case FieldType::targets:
      if (!v.is_array() || v.empty()) return bad("expected a non-empty array of targets");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_object()) return bad("element " + std::to_string(i) + " is not an object");
        for (const char* key : {"weight", "center", "sigma"})
          if (!v[i].contains(key) || !v[i][key].is_number()) {
            out.push_back({p + "." + key, Severity::error, "required number missing"});
            return false;
          }
        if (!(v[i]["weight"].get<double>() >= 0)) return bad("element " + std::to_string(i) + " has a negative weight");
        if (!(v[i]["sigma"].get<double>() > 0)) return bad("element " + std::to_string(i) + " needs sigma > 0");
        for (const auto& [key, val] : v[i].items())
          if (key != "weight" && key != "center" && key != "sigma")
            out.push_back({p + "." + key, Severity::warning, "unknown key ignored"});
      }
      return true;
  }
  return true;
}

inline bool on_lattice(double k, double dk, double kmax) {
  const double s = k / dk;
  return std::abs(s - std::round(s)) < 1e-9 * std::max(1.0, std::abs(s)) && std::abs(k) <= kmax * (1 + 1e-12);
}

inline void physics_slab(const RunConfig& c, std::vector<Violation>& v) {
  const long dp = c.integer("particle_dim"), dt = c.integer("target_dim"), n = c.integer("targets");
  if (2 * n > dp) v.push_back({"parameters.targets", Severity::error, "needs particle_dim >= 2*targets for disjoint windows"});
  const auto w = c.numbers("weights");
  if (long(w.size()) > dt + 1) v.push_back({"parameters.weights", Severity::error, "more ensemble members than target_dim + 1"});
  double sum = 0;
  for (double x : w) sum += x;
  if (std::abs(sum - 1.0) > 1e-12) v.push_back({"parameters.weights", Severity::error, "weights must sum to 1"});
  if (std::pow(double(w.size()), double(n)) > 64)
    v.push_back({"parameters.targets", Severity::error, "more than 64 target configurations for the exact oracle"});
  if (double(dp) * std::pow(double(dt), double(n)) > 4096)
    v.push_back({"parameters.targets", Severity::error, "exact oracle register exceeds 4096 states"});
  auto l = c.numbers("lambdas");
  std::sort(l.begin(), l.end());
  if (l.size() < 4 || l.back() < 10.0 * l.front() * (1 - 1e-12))
    v.push_back({"parameters.lambdas", Severity::error, "need at least 4 couplings spanning a decade"});
  if (l.back() > 0.5) v.push_back({"parameters.lambdas", Severity::warning, "couplings above 0.5 leave the perturbative regime"});
}

inline void physics_lindblad(const RunConfig& c, std::vector<Violation>& v) {
  const double steps = c.num("t_final") / c.num("dt");
  if (steps > 1e7) v.push_back({"parameters.dt", Severity::error, "more than 1e7 steps"});
  if (c.str("fixture") == "amplitude_damping" && 2.0 * c.num("gamma") * c.num("dt") > 0.1)
    v.push_back({"parameters.dt", Severity::warning, "dt*2*gamma above 0.1; RK4 error will be visible"});
  if (c.str("fixture") == "lattice" && c.integer("particle_dim") > 64)
    v.push_back({"parameters.particle_dim", Severity::error, "lattice fixture limited to 64 sites"});
}

inline void physics_gas(const RunConfig& c, std::vector<Violation>& v) {
  const int d = int(c.integer("dimension"));
  if (d != 1 && d != 3) v.push_back({"parameters.dimension", Severity::error, "must be 1 or 3"});
  const std::string pot = c.str("potential");
  if (c.str("amplitude") == "contact_exact" && pot != "contact")
    v.push_back({"parameters.amplitude", Severity::error, "contact_exact needs potential = contact"});
  if (pot == "tabulated" && (!c.has("table") || d != 1))
    v.push_back({"parameters.table", Severity::error, "tabulated potential needs a table file and dimension 1"});
  const double m1 = c.num("m1"), m2 = c.num("m2");
  const std::string limit = c.str("limit");
  if (limit == "heavy_target" && m1 / m2 >= 0.1)
    v.push_back({"parameters.m1", Severity::warning,
                 "heavy-target limit with m1/m2 = " + json(m1 / m2).dump() + "; the expansion needs m1/m2 << 1"});
  if (limit == "heavy_particle" && m2 / m1 >= 0.1)
    v.push_back({"parameters.m2", Severity::warning,
                 "heavy-particle limit with m2/m1 = " + json(m2 / m1).dump() + "; the expansion needs m2/m1 << 1"});
  if (c.integer("order") > 1) v.push_back({"parameters.order", Severity::error, "order must be 0 or 1"});
  const double dk = c.num("dk"), kmax = c.num("k_max");
  if (kmax < 2 * dk) v.push_back({"parameters.k_max", Severity::error, "lattice needs k_max >= 2*dk"});
  for (double k : c.numbers("k_values"))
    if (!on_lattice(k, dk, kmax) || k == 0.0)
      v.push_back({"parameters.k_values", Severity::error, "k = " + json(k).dump() + " is zero or not a lattice point"});
  if (c.has("targets")) {
    double sum = 0, mean = 0;
    for (const auto& t : c.parameters["targets"]) {
      sum += t["weight"].get<double>();
      mean += t["weight"].get<double>() * t["center"].get<double>();
    }
    if (std::abs(sum - 1.0) > 1e-9) v.push_back({"parameters.targets", Severity::error, "weights must sum to 1"});
    if (std::abs(mean) > 1e-9) v.push_back({"parameters.targets", Severity::error, "gas must be at rest (zero mean momentum)"});
  }
  const std::string kernel = c.str("kernel");
  if (kernel != "none") {
    if (d != 1) v.push_back({"parameters.kernel", Severity::error, "momentum kernels need dimension 1"});
    const double step = c.num("v1") * dk;
    if (c.num("eta") < 2.0 * step)
      v.push_back({"parameters.eta", Severity::error,
                   "eta = " + json(c.num("eta")).dump() + " does not resolve the energy lattice; needs eta >= 2*v1*dk = " +
                       json(2.0 * step).dump()});
    const double n = 2.0 * std::floor(kmax / dk) + 1.0;
    if (n * n > 5e7) v.push_back({"parameters.dk", Severity::error, "kernel lattice too large (N^2 > 5e7)"});
  }
}

inline void physics_young(const RunConfig& c, std::vector<Violation>& v) {
  if (c.num("screen_distance") < 10.0 * c.num("slit_separation"))
    v.push_back({"parameters.screen_distance", Severity::error, "far field needs screen_distance >= 10*slit_separation"});
  if (c.has("medium_wavenumber")) {
    const auto k = c.parameters["medium_wavenumber"];
    if (!(k[0].get<double>() > 0)) v.push_back({"parameters.medium_wavenumber", Severity::error, "Re k' must be positive"});
    if (k[1].get<double>() < 0)
      v.push_back({"parameters.medium_wavenumber", Severity::error, "Im k' < 0 would amplify the beam"});
    if (c.has("attenuation"))
      v.push_back({"parameters.attenuation", Severity::error, "give either attenuation or medium_wavenumber"});
  }
  if (c.num("screen_periods") < c.num("window_periods"))
    v.push_back({"parameters.screen_periods", Severity::error, "screen must cover the background window"});
  if (c.flag("crossed_terms")) {
    const double w = c.num("packet_width"), r = c.num("target_range");
    if (2.0 + 10.0 * (w + r) + 3.0 * w > double(c.integer("sites")))
      v.push_back({"parameters.sites", Severity::error, "register too small for a separation of 10*(packet_width + target_range)"});
    if (c.integer("sites") > 96) v.push_back({"parameters.sites", Severity::warning, "large registers make the split run slow"});
  }
}

}  // namespace detail

/// Schema check and defaults; `cfg` is filled when no errors are found.
inline std::vector<Violation> check_schema(const json& doc, RunConfig& cfg) {
  std::vector<Violation> v;
  if (!doc.is_object()) return {{"<root>", Severity::error, "configuration must be a JSON object"}};
  for (const auto& [key, val] : doc.items())
    if (key != "scenario" && key != "seed" && key != "output_dir" && key != "parameters")
      v.push_back({key, Severity::warning, "unknown key ignored"});
  if (!doc.contains("scenario") || !doc["scenario"].is_string()) {
    v.push_back({"scenario", Severity::error, "required string missing"});
    return v;
  }
  cfg.scenario = doc["scenario"].get<std::string>();
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
    v.push_back({"scenario", Severity::error, "must be one of " + json(names).dump()});
    return v;
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) v.push_back({"seed", Severity::error, "expected a non-negative integer"});
    else cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) v.push_back({"output_dir", Severity::error, "expected a string"});
    else cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  json params = doc.value("parameters", json::object());
  if (!params.is_object()) {
    v.push_back({"parameters", Severity::error, "expected an object"});
    return v;
  }
  const auto& schema = scenario_schema(cfg.scenario);
  for (const auto& [key, val] : params.items()) {
    const bool known = std::any_of(schema.begin(), schema.end(), [&](const FieldSpec& f) { return f.name == key; });
    if (!known) v.push_back({"parameters." + key, Severity::warning, "unknown key ignored"});
  }
  cfg.parameters = json::object();
  for (const auto& f : schema) {
    if (params.contains(f.name)) {
      if (detail::check_value(f, params[f.name], "parameters." + f.name, v)) cfg.parameters[f.name] = params[f.name];
    } else if (!f.fallback.is_null()) {
      cfg.parameters[f.name] = f.fallback;
    }
  }
  return v;
}

inline std::vector<Violation> check_physics(const RunConfig& c) {
  std::vector<Violation> v;
  if (c.scenario == "slab-convergence") detail::physics_slab(c, v);
  if (c.scenario == "lindblad") detail::physics_lindblad(c, v);
  if (c.scenario == "gas") detail::physics_gas(c, v);
  if (c.scenario == "young") detail::physics_young(c, v);
  return v;
}

inline std::vector<Violation> validate_config(const json& doc, RunConfig* out = nullptr) {
  RunConfig cfg;
  auto v = check_schema(doc, cfg);
  if (!has_errors(v)) {
    const auto p = check_physics(cfg);
    v.insert(v.end(), p.begin(), p.end());
  }
  if (out) *out = std::move(cfg);
  return v;
}

inline json read_json_file(const std::string& path, std::vector<Violation>& v) {
  std::ifstream is(path);
  if (!is) {
    v.push_back({"<file>", Severity::error, "cannot open " + path});
    return nullptr;
  }
  try {
    return json::parse(is, nullptr, true, true);
  } catch (const json::parse_error& e) {
    v.push_back({"<file>", Severity::error, std::string("parse error: ") + e.what()});
    return nullptr;
  }
}

inline std::vector<Violation> validate_config_file(const std::string& path) {
  std::vector<Violation> v;
  const json doc = read_json_file(path, v);
  if (has_errors(v)) return v;
  return validate_config(doc);
}

/// Parsed, defaulted and validated; throws ConfigError on any error.
inline RunConfig load_run_config(const std::string& path, std::vector<Violation>* warnings = nullptr) {
  std::vector<Violation> v;
  const json doc = read_json_file(path, v);
  if (has_errors(v)) throw ConfigError(v);
  RunConfig cfg;
  v = validate_config(doc, &cfg);
  if (has_errors(v)) throw ConfigError(v);
  if (warnings) *warnings = v;
  return cfg;
}

}  // namespace decohere::app

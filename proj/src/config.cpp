#include "pvm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "pvm/errors.hpp"
#include "pvm/report.hpp"

namespace pvm {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

double get_number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int get_int(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::uint64_t get_seed(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    throw ConfigError(where + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::optional<double> get_optional(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number or null");
  return j.at(key).get<double>();
}

FieldSpec parse_field(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, where, {"family", "amplitude", "mode", "lambda", "power", "seed", "path"});
  FieldSpec f;
  if (j.contains("family")) {
    if (!j.at("family").is_string()) throw ConfigError(where + ".family: expected a string");
    f.family = j.at("family").get<std::string>();
  }
  static const std::set<std::string> families = {"zero",      "exponential", "robin_exponential",
                                                 "power_exponential", "eigenmode", "random", "file"};
  if (!families.count(f.family)) throw ConfigError(where + ".family: unknown family \"" + f.family + "\"");
  f.amplitude = get_number(j, "amplitude", f.amplitude, where);
  if (j.contains("mode")) {
    const json& m = j.at("mode");
    if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() || !m[1].is_number_integer())
      throw ConfigError(where + ".mode: expected [k1, k2]");
    f.k1 = m[0].get<int>();
    f.k2 = m[1].get<int>();
    if (f.k1 < 1 || f.k2 < 1) throw ConfigError(where + ".mode: indices must be >= 1");
  }
  f.lambda = get_number(j, "lambda", f.lambda, where);
  f.power = get_int(j, "power", f.power, where);
  if (f.power < 0) throw ConfigError(where + ".power: must be >= 0");
  if (j.contains("seed")) f.seed = get_seed(j.at("seed"), where + ".seed");
  if (j.contains("path")) {
    if (!j.at("path").is_string()) throw ConfigError(where + ".path: expected a string");
    f.path = j.at("path").get<std::string>();
  }
  if (f.family == "file" && f.path.empty()) throw ConfigError(where + ": family \"file\" needs a path");
  if (!std::isfinite(f.amplitude)) throw ConfigError(where + ".amplitude: must be finite");
  if ((f.family == "exponential" || f.family == "robin_exponential" || f.family == "power_exponential") &&
      !(f.lambda > 0))
    throw ConfigError(where + ".lambda: must be > 0");
  return f;
}

json field_to_json(const FieldSpec& f) {
  json j = {{"family", f.family}, {"amplitude", f.amplitude}, {"mode", {f.k1, f.k2}},
            {"lambda", f.lambda}, {"power", f.power}};
  if (f.seed) j["seed"] = *f.seed;
  if (!f.path.empty()) j["path"] = f.path;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  try {
    params.validate();
    disc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(tolerances.resonance_tol > 0)) throw ConfigError("tolerances.resonance_tol must be > 0");
  if (!(tolerances.picard_tol > 0)) throw ConfigError("tolerances.picard_tol must be > 0");
  if (!(tolerances.tail_tol > 0 && tolerances.tail_tol < 1)) throw ConfigError("tolerances.tail_tol must be in (0, 1)");
  if (constants.C_s && !(*constants.C_s > 0)) throw ConfigError("constants.C_s must be > 0");
  if (constants.C_gs && !(*constants.C_gs >= 1)) throw ConfigError("constants.C_gs must be >= 1");
  if (options.ensemble_size < 1) throw ConfigError("options.ensemble_size must be >= 1");
  if (!(options.t_final > 0)) throw ConfigError("options.t_final must be > 0");
  if (options.max_iter < 1) throw ConfigError("options.max_iter must be >= 1");
  if (options.fd_steps < 1) throw ConfigError("options.fd_steps must be >= 1");
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  require_object(j, "config");
  reject_unknown(j, "config", {"params", "disc", "seed", "tolerances", "constants", "initial_data", "options"});
  RunConfig c;
  c.base_dir = base_dir;
  if (j.contains("params")) {
    const json& p = j.at("params");
    require_object(p, "params");
    reject_unknown(p, "params", {"a", "nu", "gamma", "beta", "s"});
    c.params.a = get_number(p, "a", c.params.a, "params");
    c.params.nu = get_number(p, "nu", c.params.nu, "params");
    c.params.gamma = get_number(p, "gamma", c.params.gamma, "params");
    c.params.beta = get_number(p, "beta", c.params.beta, "params");
    c.params.s = get_int(p, "s", c.params.s, "params");
  }
  if (j.contains("disc")) {
    const json& d = j.at("disc");
    require_object(d, "disc");
    reject_unknown(d, "disc", {"k_max", "n_z", "l_z", "n_t", "quad_nodes"});
    c.disc.k_max = get_int(d, "k_max", c.disc.k_max, "disc");
    c.disc.n_z = get_int(d, "n_z", c.disc.n_z, "disc");
    c.disc.l_z = get_number(d, "l_z", c.disc.l_z, "disc");
    c.disc.n_t = get_int(d, "n_t", c.disc.n_t, "disc");
    c.disc.quad_nodes = get_int(d, "quad_nodes", c.disc.quad_nodes, "disc");
  }
  if (j.contains("seed")) c.seed = get_seed(j.at("seed"), "seed");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    require_object(t, "tolerances");
    reject_unknown(t, "tolerances", {"resonance_tol", "picard_tol", "tail_tol"});
    c.tolerances.resonance_tol = get_number(t, "resonance_tol", c.tolerances.resonance_tol, "tolerances");
    c.tolerances.picard_tol = get_number(t, "picard_tol", c.tolerances.picard_tol, "tolerances");
    c.tolerances.tail_tol = get_number(t, "tail_tol", c.tolerances.tail_tol, "tolerances");
  }
  if (j.contains("constants")) {
    const json& k = j.at("constants");
    require_object(k, "constants");
    reject_unknown(k, "constants", {"C_s", "C_gs"});
    c.constants.C_s = get_optional(k, "C_s", "constants");
    c.constants.C_gs = get_optional(k, "C_gs", "constants");
  }
  if (j.contains("initial_data")) {
    const json& d = j.at("initial_data");
    require_object(d, "initial_data");
    reject_unknown(d, "initial_data", {"u0", "omega0", "f"});
    if (d.contains("u0")) c.initial_data.u0 = parse_field(d.at("u0"), "initial_data.u0");
    if (d.contains("omega0")) c.initial_data.omega0 = parse_field(d.at("omega0"), "initial_data.omega0");
    if (d.contains("f")) c.initial_data.f = parse_field(d.at("f"), "initial_data.f");
  }
  if (j.contains("options")) {
    const json& o = j.at("options");
    require_object(o, "options");
    reject_unknown(o, "options", {"ensemble_size", "t_final", "max_iter", "fd_steps", "snapshots"});
    c.options.ensemble_size = get_int(o, "ensemble_size", c.options.ensemble_size, "options");
    c.options.t_final = get_number(o, "t_final", c.options.t_final, "options");
    c.options.max_iter = get_int(o, "max_iter", c.options.max_iter, "options");
    c.options.fd_steps = get_int(o, "fd_steps", c.options.fd_steps, "options");
    if (o.contains("snapshots")) {
      if (!o.at("snapshots").is_boolean()) throw ConfigError("options.snapshots: expected a boolean");
      c.options.snapshots = o.at("snapshots").get<bool>();
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json to_json(const RunConfig& c) {
  json j;
  j["params"] = {{"a", c.params.a}, {"nu", c.params.nu}, {"gamma", c.params.gamma},
                 {"beta", c.params.beta}, {"s", c.params.s}};
  j["disc"] = {{"k_max", c.disc.k_max}, {"n_z", c.disc.n_z}, {"l_z", c.disc.l_z},
               {"n_t", c.disc.n_t}, {"quad_nodes", c.disc.quad_nodes}};
  j["seed"] = c.seed;
  j["tolerances"] = {{"resonance_tol", c.tolerances.resonance_tol},
                     {"picard_tol", c.tolerances.picard_tol},
                     {"tail_tol", c.tolerances.tail_tol}};
  j["constants"] = {{"C_s", c.constants.C_s ? json(*c.constants.C_s) : json(nullptr)},
                    {"C_gs", c.constants.C_gs ? json(*c.constants.C_gs) : json(nullptr)}};
  j["initial_data"] = {{"u0", field_to_json(c.initial_data.u0)},
                       {"omega0", field_to_json(c.initial_data.omega0)}};
  if (c.initial_data.f) j["initial_data"]["f"] = field_to_json(*c.initial_data.f);
  j["options"] = {{"ensemble_size", c.options.ensemble_size}, {"t_final", c.options.t_final},
                  {"max_iter", c.options.max_iter}, {"fd_steps", c.options.fd_steps},
                  {"snapshots", c.options.snapshots}};
  return j;
}

SpectralField3 make_field(const FieldSpec& spec, const Grid& grid, const ModelParams& params,
                          std::uint64_t seed, const std::filesystem::path& base_dir) {
  const double amp = spec.amplitude;
  if (spec.family == "zero") return SpectralField3(grid);
  if (spec.family == "file") {
    std::filesystem::path p = spec.path;
    if (p.is_relative()) p = base_dir / p;
    return amp * read_snapshot_csv(p, grid);
  }
  if (spec.family == "random") {
    RandomFieldOptions opts;
    if (params.gamma > 0) opts.robin_gamma = params.gamma;
    Rng rng(spec.seed ? *spec.seed : seed);
    return random_smooth(rng, opts).scaled(amp).sample(grid);
  }
  ZProfile prof;
  if (spec.family == "exponential")
    prof = ZProfile::exponential(spec.lambda);
  else if (spec.family == "robin_exponential")
    prof = ZProfile::robin_exponential(spec.lambda, params.gamma);
  else if (spec.family == "power_exponential")
    prof = ZProfile::power_exponential(spec.power, spec.lambda);
  else if (spec.family == "eigenmode") {
    if (!(params.gamma > 0)) throw ConfigError("family \"eigenmode\" needs gamma > 0");
    prof = ZProfile::exponential(params.gamma);
  }
  else
    throw ConfigError("unknown field family \"" + spec.family + "\"");
  if (spec.k1 > grid.k_max() || spec.k2 > grid.k_max())
    throw ConfigError("field mode (" + std::to_string(spec.k1) + "," + std::to_string(spec.k2) +
                      ") is not resolved by k_max = " + std::to_string(grid.k_max()));
  return separable(spec.k1, spec.k2, amp, prof).sample(grid);
}

}  // namespace pvm

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pvm/families.hpp"
#include "pvm/field.hpp"
#include "pvm/grid.hpp"

namespace pvm {

struct Tolerances {
  double resonance_tol = 1e-8;
  double picard_tol = 1e-8;
  double tail_tol = 1e-10;
};

/// Overrides for the calibrated constants. A C_gs override is multiplied by
/// the safety factor 1.25 before use.
struct Constants {
  std::optional<double> C_s;
  std::optional<double> C_gs;
};

/// One initial field: a named analytic family or a coefficient file.
///   zero, exponential (e^{-lambda z}), robin_exponential, power_exponential
///   (z^power e^{-lambda z}), eigenmode (e^{-gamma z}), random, file.
struct FieldSpec {
  std::string family = "zero";
  double amplitude = 1.0;
  int k1 = 1;
  int k2 = 1;
  double lambda = 1.0;
  int power = 3;
  std::optional<std::uint64_t> seed;  ///< random family; defaults to the run seed
  std::string path;                   ///< file family, relative to the config file

  bool operator==(const FieldSpec&) const = default;
};

struct InitialData {
  FieldSpec u0;      ///< v0 = u0^2
  FieldSpec omega0;
  std::optional<FieldSpec> f;  ///< elliptic forcing; omega0 when absent
};

/// Run controls that the model parameters do not cover.
struct RunOptions {
  int ensemble_size = 50;
  double t_final = 1.0;   ///< heat command horizon
  int max_iter = 30;
  int fd_steps = 2000;
  bool snapshots = false;
};

struct RunConfig {
  ModelParams params;
  Discretization disc;
  std::uint64_t seed = 1;
  Tolerances tolerances;
  Constants constants;
  InitialData initial_data;
  RunOptions options;
  std::filesystem::path base_dir;  ///< directory of the config file

  void validate() const;
};

/// Strict parse: unknown keys and wrongly typed values are ConfigErrors.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

/// Samples a field spec on a grid. `seed` is used by the random family when
/// the spec carries none.
SpectralField3 make_field(const FieldSpec& spec, const Grid& grid, const ModelParams& params,
                          std::uint64_t seed, const std::filesystem::path& base_dir = {});

}  // namespace pvm

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pvm/field.hpp"
#include "pvm/verify.hpp"

namespace pvm {

struct NormRow {
  double t = 0.0;
  double v_norm = 0.0;      ///< ||v||_{H^{s+1}}
  double omega_norm = 0.0;  ///< ||omega||_{H^s}
  double energy = 0.0;      ///< ||omega||_{L^2}^2

  bool operator==(const NormRow&) const = default;
};

struct RunReport {
  std::string command;
  nlohmann::json config_echo;
  std::map<std::string, double> measured_constants;
  std::map<std::string, std::string> info;
  std::map<std::string, std::vector<double>> diagnostics;
  std::vector<Certificate> certificates;
  std::vector<NormRow> norm_timeseries;
  std::map<std::string, double> error_budget;
  std::vector<std::string> warnings;
  std::map<std::string, double> timing;  ///< wall-clock seconds; excluded from comparisons

  /// Content equality without the timing block.
  bool same_content(const RunReport& other) const;
};

/// Non-finite numbers are written as null and read back as NaN.
nlohmann::json to_json(const RunReport& report, bool with_timing = true);
RunReport report_from_json(const nlohmann::json& j);

void write_report(const RunReport& report, const std::filesystem::path& path);
RunReport read_report(const std::filesystem::path& path);

/// Header "t,H^{s+1}_v,H^s_omega,energy"; 17 significant digits.
void write_norms_csv(const std::vector<NormRow>& rows, const std::filesystem::path& path);
std::vector<NormRow> read_norms_csv(const std::filesystem::path& path);

/// Rows (k1, k2, j, coefficient) for every coefficient.
void write_snapshot_csv(const SpectralField3& field, const std::filesystem::path& path);
/// Reads a snapshot onto `grid`; absent coefficients are zero, and entries
/// outside the grid are an IoError.
SpectralField3 read_snapshot_csv(const std::filesystem::path& path, const Grid& grid);

}  // namespace pvm

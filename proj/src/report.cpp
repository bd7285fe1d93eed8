#include "pvm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pvm/errors.hpp"

namespace pvm {

using nlohmann::json;

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw IoError("report: expected a number");
  return j.get<double>();
}

json number_map(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

std::map<std::string, double> read_number_map(const json& j) {
  std::map<std::string, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = read_number(it.value());
  return m;
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

bool RunReport::same_content(const RunReport& o) const {
  // NaN-aware comparison through the serialized form.
  return to_json(*this, false) == to_json(o, false);
}

json to_json(const RunReport& r, bool with_timing) {
  json j;
  j["command"] = r.command;
  j["config"] = r.config_echo;
  j["measured_constants"] = number_map(r.measured_constants);
  j["info"] = r.info;
  json diag = json::object();
  for (const auto& [k, v] : r.diagnostics) {
    json arr = json::array();
    for (double x : v) arr.push_back(number(x));
    diag[k] = arr;
  }
  j["diagnostics"] = diag;
  json certs = json::array();
  for (const auto& c : r.certificates) {
    certs.push_back({{"name", c.name},
                     {"measured", number(c.measured)},
                     {"bound", number(c.bound)},
                     {"margin", c.margin ? number(*c.margin) : json(nullptr)},
                     {"passed", c.passed},
                     {"detail", c.detail}});
  }
  j["certificates"] = certs;
  json rows = json::array();
  for (const auto& row : r.norm_timeseries)
    rows.push_back({{"t", number(row.t)},
                    {"v_norm", number(row.v_norm)},
                    {"omega_norm", number(row.omega_norm)},
                    {"energy", number(row.energy)}});
  j["norm_timeseries"] = rows;
  j["error_budget"] = number_map(r.error_budget);
  j["warnings"] = r.warnings;
  if (with_timing) j["timing"] = number_map(r.timing);
  return j;
}

RunReport report_from_json(const json& j) {
  try {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.config_echo = j.at("config");
    r.measured_constants = read_number_map(j.at("measured_constants"));
    r.info = j.at("info").get<std::map<std::string, std::string>>();
    for (auto it = j.at("diagnostics").begin(); it != j.at("diagnostics").end(); ++it) {
      std::vector<double> v;
      for (const auto& x : it.value()) v.push_back(read_number(x));
      r.diagnostics[it.key()] = std::move(v);
    }
    for (const auto& c : j.at("certificates")) {
      Certificate cert;
      cert.name = c.at("name").get<std::string>();
      cert.measured = read_number(c.at("measured"));
      cert.bound = read_number(c.at("bound"));
      if (!c.at("margin").is_null()) cert.margin = read_number(c.at("margin"));
      cert.passed = c.at("passed").get<bool>();
      cert.detail = c.at("detail").get<std::string>();
      r.certificates.push_back(std::move(cert));
    }
    for (const auto& row : j.at("norm_timeseries"))
      r.norm_timeseries.push_back({read_number(row.at("t")), read_number(row.at("v_norm")),
                                   read_number(row.at("omega_norm")), read_number(row.at("energy"))});
    r.error_budget = read_number_map(j.at("error_budget"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("timing")) r.timing = read_number_map(j.at("timing"));
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("report: malformed content: ") + e.what());
  }
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(report).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

RunReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + " is not valid JSON: " + e.what());
  }
}

void write_norms_csv(const std::vector<NormRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "t,H^{s+1}_v,H^s_omega,energy\n";
  for (const auto& r : rows)
    out << format17(r.t) << ',' << format17(r.v_norm) << ',' << format17(r.omega_norm) << ','
        << format17(r.energy) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<NormRow> read_norms_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,H^{s+1}_v,H^s_omega,energy")
    throw IoError(path.string() + ": unexpected header");
  std::vector<NormRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    NormRow r;
    char c1, c2, c3;
    std::istringstream ss(line);
    if (!(ss >> r.t >> c1 >> r.v_norm >> c2 >> r.omega_norm >> c3 >> r.energy) || c1 != ',' || c2 != ',' ||
        c3 != ',')
      throw IoError(path.string() + ": malformed row \"" + line + "\"");
    rows.push_back(r);
  }
  return rows;
}

void write_snapshot_csv(const SpectralField3& field, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const Grid& g = field.grid();
  out << "k1,k2,j,coefficient\n";
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const Mode k = g.mode(m);
    const auto p = field.profile(m);
    for (std::size_t j = 0; j < p.size(); ++j)
      out << k.k1 << ',' << k.k2 << ',' << j << ',' << format17(p[j]) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

SpectralField3 read_snapshot_csv(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "k1,k2,j,coefficient")
    throw IoError(path.string() + ": unexpected header");
  SpectralField3 f(grid);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int k1, k2, j;
    double c;
    char s1, s2, s3;
    std::istringstream ss(line);
    if (!(ss >> k1 >> s1 >> k2 >> s2 >> j >> s3 >> c) || s1 != ',' || s2 != ',' || s3 != ',')
      throw IoError(path.string() + ": malformed row \"" + line + "\"");
    if (k1 < 1 || k2 < 1 || k1 > grid.k_max() || k2 > grid.k_max() || j < 0 || j >= grid.n_z())
      throw IoError(path.string() + ": entry (" + std::to_string(k1) + "," + std::to_string(k2) + "," +
                    std::to_string(j) + ") lies outside the grid");
    f.at(k1, k2, j) = c;
  }
  return f;
}

}  // namespace pvm

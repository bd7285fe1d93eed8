#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "pvm/config.hpp"
#include "pvm/report.hpp"

namespace pvm {

enum class Command { calibrate, elliptic, heat, picard, verify, convergence };

/// Throws ConfigError for an unknown name.
Command parse_command(const std::string& name);
std::string command_name(Command c);

struct RunRequest {
  std::string command;
  std::filesystem::path config;  ///< may be empty for verify
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
};

/// Runs one command and writes report.json and norms.csv (plus snapshots
/// when enabled) into `out_dir`. Solver errors propagate.
RunReport execute(Command command, const RunConfig& config, const std::filesystem::path& out_dir);

/// Re-checks the stored outputs in `out_dir` and writes them to out_dir/verify.
RunReport verify_outputs(const std::filesystem::path& out_dir);

/// Exit code 0 if every certificate passed, 2 on a certificate failure and
/// 1 on an operational error (message on `err`).
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace pvm

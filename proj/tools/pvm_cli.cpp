#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pvm/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Partial-viscosity model solver and certificate harness"};
  pvm::RunRequest request;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  app.add_option("--command", request.command, "calibrate | elliptic | heat | picard | verify | convergence")
      ->required()
      ->check(CLI::IsMember({"calibrate", "elliptic", "heat", "picard", "verify", "convergence"}));
  app.add_option("--config", config, "JSON run configuration");
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--seed", seed, "overrides the configured seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  request.config = config;
  request.out = out;
  request.seed = seed;
  return pvm::run(request, std::cout, std::cerr);
}

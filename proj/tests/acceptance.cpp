#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pvm/config.hpp"
#include "pvm/domain.hpp"
#include "pvm/elliptic.hpp"
#include "pvm/errors.hpp"
#include "pvm/families.hpp"
#include "pvm/heat.hpp"
#include "pvm/picard.hpp"
#include "pvm/report.hpp"
#include "pvm/run.hpp"
#include "pvm/verify.hpp"

using namespace pvm;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

// Tolerances and limits of the acceptance criteria.
constexpr double kEllipticError = 1e-3;
constexpr double kOrderTarget = 2.0;
constexpr double kOrderWindow = 0.2;
constexpr double kEigenmodeError = 1e-5;
constexpr double kFdEigenmodeError = 1e-3;
constexpr int kFdSteps = 2000;
constexpr double kCrossSolverDifference = 5e-3;
constexpr double kMinJointOrder = 1.8;
constexpr double kGrowthSafety = 1.1;
constexpr double kMaxRatio = 0.55;
constexpr int kMaxIterations = 30;
constexpr double kPicardTol = 1e-8;
constexpr double kFixedPointMove = 2e-8;
constexpr double kUniquenessDistance = 1e-7;
constexpr double kHeatFlowDistance = 1e-8;

constexpr std::uint64_t kCrossSeed = 404;
constexpr std::uint64_t kCalibrationSeed = 505;
constexpr std::uint64_t kHeldOutSeed = 606;
constexpr int kEnsemble = 50;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Energies of every heat run made by criteria 3 to 5, for criterion 6.
struct HeatSeries {
  std::vector<double> times;
  std::vector<double> energies;
  ModelParams params;
};
std::vector<HeatSeries> heat_series;

void record(std::span<const double> times, std::span<const SpectralField3> omega, const ModelParams& p) {
  heat_series.push_back({{times.begin(), times.end()}, energies(omega), p});
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "pvm_acceptance";
  fs::create_directories(p);
  return p;
}

fs::path config_path(const char* name) { return fs::path(PVM_SOURCE_DIR) / "configs" / name; }

Outcome elliptic_manufactured() {
  const double beta = 1.0;
  const int levels[] = {128, 256, 512, 1024};
  std::vector<double> h, err;
  double at512 = 0.0;
  for (int nz : levels) {
    const Grid g(pi, 1, nz, 20.0);
    const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(1.0)).sample(g);
    const SpectralField3 v = EllipticSolver(g, beta).solve(f);
    const double e = l2_norm(v - f) / l2_norm(f);
    h.push_back(g.dz());
    err.push_back(e);
    if (nz == 512) at512 = e;
  }
  const double order = observed_order(h, err);
  return {at512 < kEllipticError && std::abs(order - kOrderTarget) <= kOrderWindow,
          "error(n_z=512) " + fmt("%.3e", at512) + ", order " + fmt("%.3f", order)};
}

Outcome resonance_detection() {
  const Grid g(pi, 4, 256, 20.0);
  bool named = false;
  std::string message;
  try {
    EllipticSolver(g, std::sqrt(2.0));
  } catch (const ResonanceError& e) {
    message = e.what();
    named = message.find("(1,1)") != std::string::npos;
  }
  const EllipticSolver near(g, std::sqrt(2.0) + 1e-3);
  const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(1.0)).sample(g);
  const SpectralField3 v = near.solve(f);
  const bool finite = std::isfinite(l2_norm(v)) && l2_norm(v) > 0;
  return {named && finite, named ? "ResonanceError names (1,1); shifted beta solves" : "no resonance error: " + message};
}

Outcome heat_eigenmode() {
  ModelParams p;
  p.gamma = 2.0;
  const Grid g(pi, 4, 1024, 20.0);
  const SpectralField3 w0 = separable(1, 1, 1.0, ZProfile::exponential(2.0)).sample(g);
  const SpectralField3 exact = std::exp(1.0) * w0;
  const RobinPropagator prop(g, p);
  const std::vector<double> times = slice_times(0.5, 11);
  const HeatRun run = heat_run(w0, times, prop);
  record(times, run.omega, p);
  const double e = l2_norm(run.omega.back() - exact) / l2_norm(exact);
  const SpectralField3 fd = fd_robin_oracle(w0, 0.5, p, kFdSteps);
  const double e_fd = l2_norm(fd - exact) / l2_norm(exact);
  return {e < kEigenmodeError && e_fd < kFdEigenmodeError,
          "transform " + fmt("%.3e", e) + ", Crank-Nicolson " + fmt("%.3e", e_fd)};
}

Outcome cross_solver() {
  ModelParams p;
  RandomFieldOptions o;
  o.robin_gamma = p.gamma;
  const auto recipes = random_ensemble(kCrossSeed, 10, o);
  const Grid g(pi, 4, 512, 24.0);
  const auto fields = sample_all(recipes, g);
  const RobinPropagator prop(g, p);
  const double times[] = {0.0, 0.1, 0.25, 0.5};
  for (const auto& w0 : fields) record(times, heat_run(w0, times, prop).omega, p);
  const Certificate diff = uniqueness_heat_check(fields, 0.5, p, kFdSteps, kCrossSolverDifference);
  const int nz_levels[] = {128, 256, 512};
  const Certificate order = uniqueness_heat_order_check(recipes, 0.5, p, g.with_n_z(128), nz_levels, kFdSteps / 4,
                                                        kMinJointOrder);
  return {diff.passed && order.passed,
          "max difference " + fmt("%.3e", diff.measured) + ", joint order " + fmt("%.3f", 1.0 / order.measured)};
}

Outcome growth_bound() {
  ModelParams p;
  RandomFieldOptions o;
  o.robin_gamma = p.gamma;
  const Grid g(pi, 8, 256, 24.0);
  const double calibration_times[] = {0.0, 0.01, 0.05, 0.1, 0.5, 1.0};
  const double held_out_times[] = {0.1, 0.5, 1.0};
  const double C = calibrate_Cgs(sample_all(random_ensemble(kCalibrationSeed, kEnsemble, o), g), p.s,
                                 calibration_times, p);
  const auto held_out = sample_all(random_ensemble(kHeldOutSeed, kEnsemble, o), g);
  const Certificate c = growth_bound_check(held_out, held_out_times, C, p.s, p);
  const double times[] = {0.0, 0.1, 0.5, 1.0};
  const RobinPropagator prop(g, p);
  for (const auto& w0 : held_out) record(times, heat_run(w0, times, prop).omega, p);
  return {c.passed && c.bound == kGrowthSafety * C,
          "C " + fmt("%.6f", C) + ", held-out ratio " + fmt("%.6f", c.measured) + " <= " + fmt("%.6f", c.bound)};
}

Outcome gronwall() {
  if (heat_series.empty()) return {false, "no heat runs recorded"};
  double worst = 0.0;
  bool ok = true;
  for (const auto& s : heat_series) {
    const Certificate c = gronwall_energy_check(s.times, s.energies, s.params);
    ok = ok && c.passed;
    worst = std::max(worst, c.measured);
  }
  return {ok, std::to_string(heat_series.size()) + " runs, worst ratio " + fmt("%.9f", worst)};
}

const Certificate* find(const RunReport& r, const std::string& name) {
  for (const auto& c : r.certificates)
    if (c.name == name) return &c;
  return nullptr;
}

RunReport smooth_report;
bool smooth_ok = false;

Outcome picard_contraction() {
  const fs::path out = scratch_dir() / "picard_smooth";
  std::ostringstream o, e;
  const int code = run({"picard", config_path("picard_smooth.json"), out, std::nullopt}, o, e);
  if (code == 1) return {false, "operational error: " + e.str()};
  smooth_report = read_report(out / "report.json");
  smooth_ok = true;
  const auto& ratios = smooth_report.diagnostics.at("ratios");
  double worst = 0.0;
  for (double r : ratios) worst = std::max(worst, r);
  const int iterations = static_cast<int>(smooth_report.measured_constants.at("iterations"));
  const bool converged = smooth_report.info.at("converged") == "true";
  const Certificate* av = find(smooth_report, "apriori-v");
  const Certificate* aw = find(smooth_report, "apriori-w");
  const bool apriori = av && aw && av->passed && aw->passed;
  return {worst <= kMaxRatio && converged && iterations <= kMaxIterations && apriori,
          "T " + fmt("%.6f", smooth_report.measured_constants.at("T")) + ", worst ratio " + fmt("%.4f", worst) + ", " +
              std::to_string(iterations) + " iterations, a priori " + (apriori ? "ok" : "violated")};
}

Outcome fixed_point_uniqueness() {
  if (!smooth_ok) return {false, "criterion 7 run unavailable"};
  const Certificate* fp = find(smooth_report, "fixed-point-residual");
  const Certificate* un = find(smooth_report, "uniqueness-model");
  if (!fp || !un) return {false, "missing certificates"};
  const bool ok = fp->measured <= kFixedPointMove && un->measured <= kUniquenessDistance;
  return {ok, "extra application " + fmt("%.3e", fp->measured) + ", path distance " + fmt("%.3e", un->measured)};
}

Outcome trivial_closures() {
  const fs::path out = scratch_dir() / "picard_zero";
  std::ostringstream o, e;
  const int code = run({"picard", config_path("picard_zero.json"), out, std::nullopt}, o, e);
  bool zero = code == 0;
  if (zero) {
    for (const auto& row : read_report(out / "report.json").norm_timeseries)
      zero = zero && row.v_norm == 0.0 && row.omega_norm == 0.0;
  }

  ModelParams p;
  const Grid g(pi, 4, 256, 24.0);
  const SpectralField3 v0(g);
  const SpectralField3 w0 = separable(1, 1, 1.0, ZProfile::exponential(p.gamma)).sample(g);
  HorizonSelection h = select_horizon(v0, w0, 1.0, p);
  PicardOptions po;
  po.tol = kPicardTol;
  const PicardResult res = picard_solve(v0, w0, p, h, 17, po);
  PicardState exact = res.state;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    exact.v[i] = SpectralField3(g);
    exact.omega[i] = std::exp(p.nu * (p.gamma * p.gamma - g.mu2(1, 1)) * exact.times[i]) * w0;
  }
  const double dist = x_distance(res.state, exact, p.s);
  return {zero && dist < kHeatFlowDistance,
          "zero data exit " + std::to_string(code) + (zero ? " with zero solution" : " (nonzero output)") +
              ", heat-flow distance " + fmt("%.3e", dist)};
}

std::string report_without_timing(const fs::path& p) {
  std::ifstream in(p);
  nlohmann::json j = nlohmann::json::parse(in);
  j.erase("timing");
  return j.dump();
}

Outcome determinism() {
  const char* cases[][2] = {{"heat", "heat_eigenmode.json"}, {"picard", "picard_zero.json"}, {"picard", "picard_smooth.json"}};
  int identical = 0;
  for (const auto& c : cases) {
    std::string first;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = scratch_dir() / ("determinism_" + std::string(c[1]) + std::to_string(rep));
      std::ostringstream o, e;
      if (run({c[0], config_path(c[1]), out, std::nullopt}, o, e) == 1) return {false, e.str()};
      const std::string text = report_without_timing(out / "report.json");
      if (rep == 0) first = text;
      else same = same && text == first;
    }
    identical += same;
  }
  return {identical == 3, std::to_string(identical) + "/3 configurations byte-identical"};
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "elliptic manufactured eigenfunction", 10.0, elliptic_manufactured},
      {2, "resonance detection", 1.0, resonance_detection},
      {3, "Robin heat eigenmode", 30.0, heat_eigenmode},
      {4, "cross-solver agreement", 300.0, cross_solver},
      {5, "heat growth bound", 600.0, growth_bound},
      {6, "Gronwall energy inequality", 60.0, gronwall},
      {7, "Picard contraction", 900.0, picard_contraction},
      {8, "fixed-point residual and uniqueness", 60.0, fixed_point_uniqueness},
      {9, "trivial closures", 60.0, trivial_closures},
      {10, "determinism", 1800.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    std::printf("[%s] %d %s: %s (%.2f s of %.0f s)\n", passed ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                seconds, c.time_limit);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

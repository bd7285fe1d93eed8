#include "pvm/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "pvm/domain.hpp"
#include "pvm/elliptic.hpp"
#include "pvm/errors.hpp"
#include "pvm/heat.hpp"
#include "pvm/picard.hpp"
#include "pvm/verify.hpp"

namespace pvm {

namespace fs = std::filesystem;

namespace {

// Seed offsets keep calibration and held-out ensembles disjoint.
constexpr std::uint64_t kSeedCs = 0;
constexpr std::uint64_t kSeedCgs = 1;
constexpr std::uint64_t kSeedProduct = 2;
constexpr std::uint64_t kHeldOut = 1000003;
constexpr double kOverrideSafety = 1.25;
const double kCalibrationTimes[] = {0.0, 0.01, 0.05, 0.1, 0.5, 1.0};
const double kHeldOutTimes[] = {0.1, 0.5, 1.0};

Grid make_grid(const RunConfig& c) {
  return Grid::make(c.params, c.disc, c.tolerances.tail_tol, std::max(3, c.params.s + 1));
}

RandomFieldOptions robin_fields(const ModelParams& p) {
  RandomFieldOptions o;
  if (p.gamma > 0) o.robin_gamma = p.gamma;
  return o;
}

std::vector<SpectralField3> ensemble(const RunConfig& c, const Grid& g, std::uint64_t seed, bool robin) {
  return sample_all(random_ensemble(seed, c.options.ensemble_size, robin ? robin_fields(c.params) : RandomFieldOptions{}),
                    g);
}

double working_Cgs(const RunConfig& c, const Grid& g, RunReport& r) {
  if (c.constants.C_gs) {
    r.info["C_gs_source"] = "override x1.25";
    return kOverrideSafety * *c.constants.C_gs;
  }
  r.info["C_gs_source"] = "calibrated";
  return calibrate_Cgs(ensemble(c, g, c.seed + kSeedCgs, true), c.params.s, kCalibrationTimes, c.params);
}

double working_Cs(const RunConfig& c, const Grid& g, const EllipticOptions& eo, RunReport& r) {
  if (c.constants.C_s) {
    r.info["C_s_source"] = "override";
    return *c.constants.C_s;
  }
  r.info["C_s_source"] = "calibrated";
  return calibrate_Cs(ensemble(c, g, c.seed + kSeedCs, false), c.params.s, c.params.beta, eo);
}

EllipticOptions elliptic_options(const RunConfig& c) {
  EllipticOptions o;
  o.resonance_tol = c.tolerances.resonance_tol;
  return o;
}

void add_tail_budget(const RunConfig& c, const Grid& g, RunReport& r) {
  if (c.params.gamma > 0) r.error_budget["tail_gamma"] = std::exp(-c.params.gamma * g.l_z());
  r.error_budget["tail_mu_min"] = std::exp(-std::sqrt(g.mu2(1, 1)) * g.l_z());
  r.error_budget["dz_squared"] = g.dz() * g.dz();
}

NormRow norm_row(double t, const SpectralField3* v, const SpectralField3& w, int s) {
  const double l2 = l2_norm(w);
  return {t, v ? sobolev_norm(*v, s + 1) : 0.0, sobolev_norm(w, s), l2 * l2};
}

void write_snapshots(const RunConfig& c, const fs::path& dir,
                     const std::vector<std::pair<std::string, const SpectralField3*>>& fields) {
  if (!c.options.snapshots) return;
  const fs::path snap = dir / "snapshots";
  fs::create_directories(snap);
  for (const auto& [name, f] : fields) write_snapshot_csv(*f, snap / (name + ".csv"));
}

void robin_warning(const SpectralField3& omega0, double gamma, RunReport& r) {
  const double scale = sobolev_norm(omega0, 1);
  const double resid = boundary_residual(omega0, gamma);
  if (scale > 0 && resid > 1e-2 * scale)
    r.warnings.push_back("initial vorticity violates the Robin condition at z = 0 (residual " +
                         std::to_string(resid) + ")");
}

void cmd_calibrate(const RunConfig& c, RunReport& r) {
  const Grid g = make_grid(c);
  const EllipticOptions eo = elliptic_options(c);
  const int s = c.params.s;
  const double C_s = calibrate_Cs(ensemble(c, g, c.seed + kSeedCs, false), s, c.params.beta, eo);
  const double C_gs = calibrate_Cgs(ensemble(c, g, c.seed + kSeedCgs, true), s, kCalibrationTimes, c.params);
  const double c_prod = calibrate_product_constant(ensemble(c, g, c.seed + kSeedProduct, false), s);
  r.measured_constants["C_s"] = C_s;
  r.measured_constants["C_gs"] = C_gs;
  r.measured_constants["c_product"] = c_prod;
  add_tail_budget(c, g, r);

  CertificateSuite suite;
  suite.add("elliptic-bound", [&] {
    return elliptic_bound_check(ensemble(c, g, c.seed + kHeldOut + kSeedCs, false), C_s, s, c.params.beta, eo);
  });
  suite.add("heat-growth-bound", [&] {
    return growth_bound_check(ensemble(c, g, c.seed + kHeldOut + kSeedCgs, true), kHeldOutTimes, C_gs, s, c.params);
  });
  suite.add("product-inequality", [&] {
    return product_inequality_check(ensemble(c, g, c.seed + kHeldOut + kSeedProduct, false), c_prod, s);
  });
  r.certificates = suite.run();
}

void cmd_elliptic(const RunConfig& c, RunReport& r, const fs::path& dir) {
  const Grid g = make_grid(c);
  const EllipticOptions eo = elliptic_options(c);
  const int s = c.params.s;
  const AdmissibilityReport adm = check_admissible(c.params.beta, g, eo.resonance_tol);
  r.measured_constants["min_gap"] = adm.min_gap;
  const EllipticSolver solver(g, c.params.beta, eo);
  const SpectralField3 f =
      make_field(c.initial_data.f ? *c.initial_data.f : c.initial_data.omega0, g, c.params, c.seed, c.base_dir);
  const SpectralField3 v = solver.solve(f);
  r.measured_constants["condition_estimate"] = solver.condition_estimate();
  r.measured_constants["robin_residual"] = robin_residual(v, c.params.beta);
  const double C_s = working_Cs(c, g, eo, r);
  r.measured_constants["C_s"] = C_s;
  add_tail_budget(c, g, r);
  r.norm_timeseries.push_back(norm_row(0.0, &v, f, s));

  CertificateSuite suite;
  suite.add("elliptic-residual", [&] {
    return make_certificate("elliptic-residual", elliptic_residual(v, f, c.params.beta), 1e-10,
                            "discrete operator consistency");
  });
  suite.add("elliptic-bound", [&] {
    return elliptic_bound_check(ensemble(c, g, c.seed + kHeldOut + kSeedCs, false), C_s, s, c.params.beta, eo);
  });
  if (sobolev_norm(f, s - 2) > 0)
    suite.add("elliptic-bound-data", [&] {
      return make_certificate("elliptic-bound-data", sobolev_norm(v, s) / sobolev_norm(f, s - 2), 1.1 * C_s,
                              "configured forcing");
    });
  r.certificates = suite.run();
  write_snapshots(c, dir, {{"forcing", &f}, {"solution", &v}});
}

void cmd_heat(const RunConfig& c, RunReport& r, const fs::path& dir) {
  const Grid g = make_grid(c);
  const int s = c.params.s;
  const SpectralField3 w0 = make_field(c.initial_data.omega0, g, c.params, c.seed, c.base_dir);
  robin_warning(w0, c.params.gamma, r);
  const RobinPropagator prop(g, c.params);
  const auto times = slice_times(c.options.t_final, c.disc.n_t);
  const HeatRun run = heat_run(w0, times, prop);
  for (std::size_t i = 0; i < times.size(); ++i) r.norm_timeseries.push_back(norm_row(times[i], nullptr, run.omega[i], s));
  const double C_gs = working_Cgs(c, g, r);
  r.measured_constants["C_gs"] = C_gs;
  r.measured_constants["boundary_residual_final"] = boundary_residual(run.omega.back(), c.params.gamma);
  add_tail_budget(c, g, r);

  CertificateSuite suite;
  suite.add("gronwall-energy", [&] { return gronwall_energy_check(times, energies(run.omega), c.params); });
  suite.add("heat-growth-bound", [&] {
    const SpectralField3 one[1] = {w0};
    return growth_bound_check(one, times, C_gs, s, c.params);
  });
  suite.add("uniqueness-heat", [&] {
    const SpectralField3 one[1] = {w0};
    return uniqueness_heat_check(one, c.options.t_final, c.params, c.options.fd_steps);
  });
  r.certificates = suite.run();
  write_snapshots(c, dir, {{"omega_initial", &run.omega.front()}, {"omega_final", &run.omega.back()}});
}

void cmd_picard(const RunConfig& c, RunReport& r, const fs::path& dir) {
  const Grid g = make_grid(c);
  const int s = c.params.s;
  const SpectralField3 u0 = make_field(c.initial_data.u0, g, c.params, c.seed, c.base_dir);
  const SpectralField3 v0 = square_field(u0);
  const SpectralField3 w0 = make_field(c.initial_data.omega0, g, c.params, c.seed + 1, c.base_dir);
  const double C_gs = working_Cgs(c, g, r);
  const HorizonSelection h = select_horizon(v0, w0, C_gs, c.params);
  r.measured_constants["C_gs"] = C_gs;
  r.measured_constants["T"] = h.T;
  r.measured_constants["M"] = h.M;
  r.measured_constants["v0_norm"] = h.v0_norm;
  r.measured_constants["omega0_norm"] = h.omega0_norm;
  r.measured_constants["T_term_data"] = h.terms[0];
  r.measured_constants["T_term_heat_constant"] = h.terms[1];
  r.measured_constants["T_term_ball_radius"] = h.terms[2];
  r.info["binding_term"] = h.binding_term;

  PicardOptions po;
  po.tol = c.tolerances.picard_tol;
  po.max_iter = c.options.max_iter;
  po.elliptic = elliptic_options(c);
  const PicardResult res = picard_solve(v0, w0, c.params, h, c.disc.n_t, po);
  const PicardDiagnostics& d = res.diagnostics;
  r.warnings.insert(r.warnings.end(), d.warnings.begin(), d.warnings.end());
  r.diagnostics["differences"] = d.differences;
  r.diagnostics["ratios"] = d.ratios;
  r.diagnostics["x_norms"] = d.x_norms;
  r.measured_constants["iterations"] = d.iterations;
  r.info["converged"] = d.converged ? "true" : "false";
  add_tail_budget(c, g, r);
  const double dt = h.T / (c.disc.n_t - 1);
  r.error_budget["dt_squared"] = dt * dt;
  for (std::size_t i = 0; i < res.state.size(); ++i)
    r.norm_timeseries.push_back(norm_row(res.state.times[i], &res.state.v[i], res.state.omega[i], s));

  const PicardMap map(g, c.params, po.elliptic);
  CertificateSuite suite;
  suite.add("contraction", [&] { return contraction_check(d); });
  suite.add("apriori-v", [&] { return apriori_v_check(res.state, h, s); });
  suite.add("apriori-w", [&] { return apriori_w_check(res.state, h, c.params); });
  suite.add("horizon-constraint", [&] { return horizon_constraint_check(h, c.params); });
  suite.add("fixed-point-residual", [&] { return fixed_point_residual_check(map, res.state, v0, w0, po.tol); });
  suite.add("uniqueness-model", [&] {
    return uniqueness_model_check(v0, w0, c.params, h, c.disc.n_t, po, res.state);
  });
  suite.add("convergence", [&] {
    return make_certificate("convergence", d.converged ? 0.0 : 1.0, 0.0,
                            std::to_string(d.iterations) + " iterations");
  });
  r.certificates = suite.run();

  std::vector<std::pair<std::string, const SpectralField3*>> snaps = {
      {"v_final", &res.state.v.back()}, {"omega_final", &res.state.omega.back()}};
  std::vector<SpectralField3> u;
  try {
    u = recover_u(std::span<const SpectralField3>(&res.state.v.back(), 1), u0);
    snaps.emplace_back("u_final", &u.front());
  } catch (const SignError& e) {
    r.warnings.push_back(e.what());
  }
  write_snapshots(c, dir, snaps);
}

void cmd_convergence(const RunConfig& c, RunReport& r, const fs::path& dir) {
  std::ofstream table(dir / "convergence.csv");
  if (!table) throw IoError("cannot write " + (dir / "convergence.csv").string());
  table.precision(17);
  table << "study,n_z,h,error\n";
  const int levels[] = {128, 256, 512, 1024};

  // Manufactured elliptic mode: f = e^{-beta z} sin sin gives K f = f / (mu^2 - beta^2).
  const double beta = c.params.beta > 0 ? c.params.beta : 1.0;
  std::vector<double> h, err;
  for (int nz : levels) {
    const Grid g(c.params.a, 1, nz, 20.0);
    const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(beta)).sample(g);
    const SpectralField3 v = EllipticSolver(g, beta, elliptic_options(c)).solve(f);
    const SpectralField3 exact = (1.0 / (g.mu2(1, 1) - beta * beta)) * f;
    const double e = l2_norm(v - exact) / l2_norm(exact);
    h.push_back(g.dz());
    err.push_back(e);
    table << "elliptic," << nz << ',' << g.dz() << ',' << e << '\n';
  }
  const double p_ell = observed_order(h, err);
  r.measured_constants["elliptic_order"] = p_ell;

  h.clear();
  err.clear();
  for (int nz : levels) {
    const Grid g(c.params.a, 1, nz, 20.0);
    const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(1.0)).sample(g);
    const SpectralField3 df = d_z(f, 1);
    const double e = l2_norm(df + f) / l2_norm(f);
    h.push_back(g.dz());
    err.push_back(e);
    table << "dz," << nz << ',' << g.dz() << ',' << e << '\n';
  }
  const double p_dz = observed_order(h, err);
  r.measured_constants["dz_order"] = p_dz;

  const Grid base = Grid::make(c.params, Discretization{c.disc.k_max, 128, c.disc.l_z, c.disc.n_t, 2},
                               c.tolerances.tail_tol);
  const auto recipes = random_ensemble(c.seed, 3, robin_fields(c.params));
  const int heat_levels[] = {128, 256, 512};
  const int base_steps = std::max(1, c.options.fd_steps / 4);
  CertificateSuite suite;
  suite.add("elliptic-order", [&] {
    return make_certificate("elliptic-order", std::abs(p_ell - 2.0), 0.2, "|order - 2|, order " + std::to_string(p_ell));
  });
  suite.add("dz-order", [&] {
    return make_certificate("dz-order", std::abs(p_dz - 2.0), 0.2, "|order - 2|, order " + std::to_string(p_dz));
  });
  suite.add("uniqueness-heat-order", [&] {
    return uniqueness_heat_order_check(recipes, c.options.t_final, c.params, base, heat_levels, base_steps);
  });
  r.certificates = suite.run();
  r.error_budget["tail_elliptic"] = std::exp(-beta * 20.0);
}

RunReport verify_impl(const fs::path& out_dir) {
  const RunReport stored = read_report(out_dir / "report.json");
  const std::vector<NormRow> rows = read_norms_csv(out_dir / "norms.csv");
  RunReport r;
  r.command = "verify";
  r.config_echo = stored.config_echo;
  r.info["source_command"] = stored.command;
  r.norm_timeseries = rows;

  CertificateSuite suite;
  suite.add("stored-verdicts", [&] {
    int bad = 0;
    for (const auto& c : stored.certificates) {
      const bool expect = std::isfinite(c.measured) && c.measured <= c.bound;
      if (expect != c.passed) ++bad;
    }
    return make_certificate("stored-verdicts", bad, 0.0,
                            std::to_string(stored.certificates.size()) + " stored certificates re-evaluated");
  });
  for (const auto& c : stored.certificates) {
    suite.add("replay:" + c.name, [c] { return make_certificate(c.name, c.measured, c.bound, c.detail); });
  }
  suite.add("norms-consistency", [&] {
    if (rows.size() != stored.norm_timeseries.size())
      throw IoError("norms.csv and report.json disagree on the number of rows");
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const NormRow& a = rows[i];
      const NormRow& b = stored.norm_timeseries[i];
      worst = std::max({worst, std::abs(a.t - b.t), std::abs(a.v_norm - b.v_norm),
                        std::abs(a.omega_norm - b.omega_norm), std::abs(a.energy - b.energy)});
    }
    return make_certificate("norms-consistency", worst, 0.0, "norms.csv against report.json");
  });

  ModelParams p;
  const auto& cfg = stored.config_echo;
  if (cfg.contains("params")) {
    p.nu = cfg["params"].value("nu", p.nu);
    p.gamma = cfg["params"].value("gamma", p.gamma);
    p.s = cfg["params"].value("s", p.s);
  }
  if (stored.command == "heat" && rows.size() >= 2) {
    suite.add("gronwall-energy", [&, p] {
      std::vector<double> t, e;
      for (const auto& row : rows) {
        t.push_back(row.t);
        e.push_back(row.energy);
      }
      return gronwall_energy_check(t, e, p);
    });
  }
  auto constant = [&](const char* key) {
    const auto it = stored.measured_constants.find(key);
    if (it == stored.measured_constants.end()) throw IoError(std::string("report lacks ") + key);
    return it->second;
  };
  if (stored.command == "picard" && !rows.empty()) {
    suite.add("apriori-v", [&] {
      double sup = 0.0;
      for (const auto& row : rows) sup = std::max(sup, row.v_norm);
      return make_certificate("apriori-v", sup, 1.1 * 2.0 * rows.front().v_norm, "from norms.csv");
    });
    suite.add("apriori-w", [&, p] {
      double sup = 0.0;
      for (const auto& row : rows) sup = std::max(sup, row.omega_norm);
      const double T = constant("T");
      const double bound = 1.1 * constant("C_gs") * heat_growth_factor(p.nu, p.gamma, T) *
                           (rows.front().omega_norm + 2.0 * T * rows.front().v_norm);
      return make_certificate("apriori-w", sup, bound, "from norms.csv");
    });
    suite.add("contraction", [&] {
      PicardDiagnostics d;
      if (auto it = stored.diagnostics.find("differences"); it != stored.diagnostics.end()) d.differences = it->second;
      if (auto it = stored.diagnostics.find("ratios"); it != stored.diagnostics.end()) d.ratios = it->second;
      return contraction_check(d);
    });
  }
  r.certificates = suite.run();
  return r;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "calibrate") return Command::calibrate;
  if (name == "elliptic") return Command::elliptic;
  if (name == "heat") return Command::heat;
  if (name == "picard") return Command::picard;
  if (name == "verify") return Command::verify;
  if (name == "convergence") return Command::convergence;
  throw ConfigError("unknown command \"" + name + "\"");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::calibrate: return "calibrate";
    case Command::elliptic: return "elliptic";
    case Command::heat: return "heat";
    case Command::picard: return "picard";
    case Command::verify: return "verify";
    case Command::convergence: return "convergence";
  }
  return "unknown";
}

RunReport execute(Command command, const RunConfig& config, const fs::path& out_dir) {
  if (command == Command::verify) return verify_outputs(out_dir);
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  RunReport r;
  r.command = command_name(command);
  r.config_echo = to_json(config);
  switch (command) {
    case Command::calibrate: cmd_calibrate(config, r); break;
    case Command::elliptic: cmd_elliptic(config, r, out_dir); break;
    case Command::heat: cmd_heat(config, r, out_dir); break;
    case Command::picard: cmd_picard(config, r, out_dir); break;
    case Command::convergence: cmd_convergence(config, r, out_dir); break;
    case Command::verify: break;
  }
  r.timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_report(r, out_dir / "report.json");
  write_norms_csv(r.norm_timeseries, out_dir / "norms.csv");
  return r;
}

RunReport verify_outputs(const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r = verify_impl(out_dir);
  const fs::path dir = out_dir / "verify";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  r.timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_report(r, dir / "report.json");
  write_norms_csv(r.norm_timeseries, dir / "norms.csv");
  return r;
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
  try {
    const Command command = parse_command(request.command);
    RunConfig config;
    if (command != Command::verify || !request.config.empty()) {
      if (request.config.empty()) throw ConfigError("--config is required for " + request.command);
      config = load_config(request.config);
    }
    if (request.seed) config.seed = *request.seed;
    if (request.out.empty()) throw ConfigError("--out is required");
    const RunReport report = execute(command, config, request.out);
    for (const auto& c : report.certificates)
      out << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured " << c.measured << "  bound " << c.bound
          << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
    for (const auto& w : report.warnings) out << "warning: " << w << '\n';
    return all_passed(report.certificates) ? 0 : 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ResonanceError& e) {
    err << "resonance: " << e.what() << '\n';
  } catch (const NoConvergenceError& e) {
    err << "no convergence: " << e.what() << '\n';
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace pvm

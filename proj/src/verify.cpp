#include "pvm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pvm/domain.hpp"
#include "pvm/elliptic.hpp"
#include "pvm/errors.hpp"

namespace pvm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_list(std::span<const double> values) {
  std::ostringstream out;
  out.precision(6);
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << values[i];
  return out.str();
}

}  // namespace

Certificate make_certificate(std::string name, double measured, double bound, std::string detail) {
  Certificate c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.detail = std::move(detail);
  c.passed = std::isfinite(measured) && measured <= bound;
  if (std::isfinite(measured) && measured != 0.0 && std::isfinite(bound)) c.margin = bound / measured - 1.0;
  return c;
}

double observed_order(std::span<const double> h, std::span<const double> errors) {
  if (h.size() != errors.size()) throw DomainError("observed_order: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (errors[i] > 0 && h[i] > 0) {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(errors[i]));
    }
  }
  if (x.size() < 2) throw DomainError("observed_order: need at least two positive errors");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Certificate gronwall_energy_check(std::span<const double> times, std::span<const double> energies,
                                  const ModelParams& params) {
  if (times.size() != energies.size()) throw DomainError("gronwall_energy_check: size mismatch");
  if (times.size() < 2) throw DomainError("gronwall_energy_check: need at least 2 samples");
  const double rate = params.gamma > 0 ? 4.0 * params.nu * params.gamma * params.gamma : 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double dt = times[i + 1] - times[i];
    if (!(dt >= 0)) throw DomainError("gronwall_energy_check: series not sorted in t");
    const double rhs = energies[i] * std::exp(rate * dt);
    double ratio;
    if (rhs > 0)
      ratio = energies[i + 1] / rhs;
    else
      ratio = energies[i + 1] > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    worst = std::max(worst, ratio);
  }
  std::ostringstream d;
  d << times.size() << " samples on [" << times.front() << ", " << times.back() << "]";
  return make_certificate("gronwall-energy", worst, 1.0 + 1e-6, d.str());
}

Certificate gronwall_energy_check(std::span<const std::pair<double, SpectralField3>> series,
                                  const ModelParams& params) {
  std::vector<double> t, e;
  for (const auto& [time, field] : series) {
    t.push_back(time);
    const double n = l2_norm(field);
    e.push_back(n * n);
  }
  return gronwall_energy_check(t, e, params);
}

std::vector<double> energies(std::span<const SpectralField3> series) {
  std::vector<double> e;
  e.reserve(series.size());
  for (const auto& f : series) {
    const double n = l2_norm(f);
    e.push_back(n * n);
  }
  return e;
}

HeatRun heat_run(const SpectralField3& omega0, std::span<const double> times, const RobinPropagator& prop) {
  HeatRun run;
  run.times.assign(times.begin(), times.end());
  const RobinModes state = prop.transform(omega0);
  for (double t : times) {
    if (!(t >= 0)) throw DomainError("heat_run: negative time");
    run.omega.push_back(t == 0.0 ? omega0 : prop.reconstruct(prop.evolve(state, t)));
  }
  return run;
}

Certificate growth_bound_check(std::span<const SpectralField3> ensemble, std::span<const double> t_grid,
                               double C_gs, int s, const ModelParams& params) {
  if (ensemble.empty()) throw DomainError("growth_bound_check: empty ensemble");
  const double measured = calibrate_Cgs(ensemble, s, t_grid, params);
  std::ostringstream d;
  d << ensemble.size() << " fields, t = {" << format_list(t_grid) << "}, C(gamma,s) = " << C_gs;
  return make_certificate("heat-growth-bound", measured, 1.1 * C_gs, d.str());
}

Certificate contraction_check(const PicardDiagnostics& diagnostics) {
  const auto& d = diagnostics.differences;
  if (!d.empty() && d.front() == 0.0)
    return make_certificate("contraction", 0.0, 0.55, "zero first difference, vacuous");
  if (diagnostics.ratios.empty()) throw DomainError("contraction_check: fewer than 3 iterates");
  const double worst = *std::max_element(diagnostics.ratios.begin(), diagnostics.ratios.end());
  return make_certificate("contraction", worst, 0.55, "ratios " + format_list(diagnostics.ratios));
}

Certificate apriori_v_check(const PicardState& state, const HorizonSelection& horizon, int s) {
  double sup = 0.0;
  for (const auto& v : state.v) sup = std::max(sup, sobolev_norm(v, s + 1));
  const double bound = 1.1 * 2.0 * horizon.v0_norm;
  std::ostringstream d;
  d << "sup ||v||_{H^" << s + 1 << "} against 2 ||v0|| = " << 2.0 * horizon.v0_norm << " (10% margin)";
  return make_certificate("apriori-v", sup, bound, d.str());
}

Certificate apriori_w_check(const PicardState& state, const HorizonSelection& horizon, const ModelParams& params) {
  double sup = 0.0;
  for (const auto& w : state.omega) sup = std::max(sup, sobolev_norm(w, params.s));
  const double raw = horizon.C_gs * heat_growth_factor(params.nu, params.gamma, horizon.T) *
                     (horizon.omega0_norm + 2.0 * horizon.T * horizon.v0_norm);
  std::ostringstream d;
  d << "sup ||omega||_{H^" << params.s << "} against " << raw << " (10% margin)";
  return make_certificate("apriori-w", sup, 1.1 * raw, d.str());
}

Certificate horizon_constraint_check(const HorizonSelection& horizon, const ModelParams& params) {
  std::ostringstream d;
  d << "T = " << horizon.T << ", binding term: " << horizon.binding_term;
  return make_certificate("horizon-constraint", horizon.constraint_lhs(params.nu, params.gamma), 1.0, d.str());
}

Certificate fixed_point_residual_check(const PicardMap& map, const PicardState& state, const SpectralField3& v0,
                                       const SpectralField3& omega0, double tol) {
  const PicardState next = map.apply(state, v0, omega0);
  const double moved = x_distance(next, state, map.params().s);
  return make_certificate("fixed-point-residual", moved, 2.0 * tol, "one extra application of the map");
}

Certificate uniqueness_model_check(const SpectralField3& v0, const SpectralField3& omega0,
                                   const ModelParams& params, const HorizonSelection& horizon, int n_t,
                                   const PicardOptions& options, const PicardState& reference,
                                   double guess_scale) {
  PicardState guess = constant_state(v0, guess_scale * omega0, slice_times(horizon.T, n_t));
  const PicardResult other = picard_solve(v0, omega0, params, horizon, n_t, options, guess);
  const double dist = x_distance(other.state, reference, params.s);
  std::ostringstream d;
  d << "second path from omega guess scaled by " << guess_scale << ", " << other.diagnostics.iterations
    << " iterations";
  return make_certificate("uniqueness-model", dist, 10.0 * options.tol, d.str());
}

Certificate elliptic_bound_check(std::span<const SpectralField3> ensemble, double C_s, int s, double beta,
                                 const EllipticOptions& options) {
  const double measured = calibrate_Cs(ensemble, s, beta, options);
  std::ostringstream d;
  d << ensemble.size() << " held-out fields, C_s = " << C_s;
  return make_certificate("elliptic-bound", measured, 1.1 * C_s, d.str());
}

double calibrate_product_constant(std::span<const SpectralField3> ensemble, int s) {
  if (ensemble.size() < 2) throw DomainError("product constant: need at least two fields");
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < ensemble.size(); ++i)
    worst = std::max(worst, product_ratio(ensemble[i], ensemble[i + 1], s));
  return worst;
}

Certificate product_inequality_check(std::span<const SpectralField3> ensemble, double c, int s) {
  const double measured = calibrate_product_constant(ensemble, s);
  std::ostringstream d;
  d << ensemble.size() - 1 << " held-out pairs, c = " << c;
  return make_certificate("product-inequality", measured, 1.05 * c, d.str());
}

Certificate uniqueness_heat_check(std::span<const SpectralField3> ensemble, double t, const ModelParams& params,
                                  int n_steps, double bound) {
  if (ensemble.empty()) throw DomainError("uniqueness_heat_check: empty ensemble");
  const RobinPropagator prop(ensemble.front().grid(), params);
  double worst = 0.0;
  for (const auto& w0 : ensemble) {
    const SpectralField3 a = prop.propagate(w0, t);
    const SpectralField3 b = fd_robin_oracle(w0, t, params, n_steps);
    const double ref = l2_norm(a);
    const double diff = l2_norm(a - b);
    worst = std::max(worst, ref > 0 ? diff / ref : diff);
  }
  std::ostringstream d;
  d << ensemble.size() << " fields, t = " << t << ", n_z = " << ensemble.front().grid().n_z()
    << ", " << n_steps << " CN steps";
  return make_certificate("uniqueness-heat", worst, bound, d.str());
}

Certificate uniqueness_heat_order_check(std::span<const FieldRecipe> recipes, double t, const ModelParams& params,
                                        const Grid& base, std::span<const int> n_z_levels, int base_steps,
                                        double min_order) {
  if (recipes.empty()) throw DomainError("uniqueness_heat_order_check: no fields");
  if (n_z_levels.size() < 2) throw DomainError("uniqueness_heat_order_check: need two levels");
  std::vector<double> h, err;
  for (int nz : n_z_levels) {
    const Grid g = base.with_n_z(nz);
    const int steps = static_cast<int>(std::lround(static_cast<double>(base_steps) * (nz - 1) /
                                                   (n_z_levels.front() - 1)));
    const RobinPropagator prop(g, params);
    double worst = 0.0;
    for (const auto& r : recipes) {
      const SpectralField3 w0 = r.sample(g);
      const SpectralField3 a = prop.propagate(w0, t);
      const SpectralField3 b = fd_robin_oracle(w0, t, params, steps);
      const double ref = l2_norm(a);
      worst = std::max(worst, ref > 0 ? l2_norm(a - b) / ref : 0.0);
    }
    h.push_back(g.dz());
    err.push_back(worst);
  }
  const double order = observed_order(h, err);
  std::ostringstream d;
  d << "order " << order << ", differences " << format_list(err);
  return make_certificate("uniqueness-heat-order", 1.0 / order, 1.0 / min_order, d.str());
}

Certificate smoothing_check(const FieldRecipe& omega0, double t, const ModelParams& params, const Grid& coarse,
                            double bound) {
  const Grid fine = coarse.with_k_max(2 * coarse.k_max());
  const double a = sobolev_norm(propagate_robin(omega0.sample(coarse), t, params), 2);
  const double b = sobolev_norm(propagate_robin(omega0.sample(fine), t, params), 2);
  if (!std::isfinite(a) || !std::isfinite(b)) throw NonFiniteError("smoothing_check: non-finite norm");
  const double change = b > 0 ? std::abs(b - a) / b : 0.0;
  std::ostringstream d;
  d << "||omega(" << t << ")||_{H^2} = " << a << " at k_max " << coarse.k_max() << ", " << b << " at k_max "
    << fine.k_max();
  return make_certificate("smoothing", change, bound, d.str());
}

void CertificateSuite::add(std::string name, std::function<Certificate()> check) {
  checks_.emplace_back(std::move(name), std::move(check));
}

std::vector<Certificate> CertificateSuite::run() const {
  std::vector<Certificate> out;
  out.reserve(checks_.size());
  for (const auto& [name, check] : checks_) {
    try {
      Certificate c = check();
      c.name = name;
      out.push_back(std::move(c));
    } catch (const std::exception& e) {
      out.push_back(make_certificate(name, kNaN, kNaN, std::string("error: ") + e.what()));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Certificate& a, const Certificate& b) { return a.name < b.name; });
  return out;
}

bool all_passed(std::span<const Certificate> certs) noexcept {
  return std::all_of(certs.begin(), certs.end(), [](const Certificate& c) { return c.passed; });
}

}  // namespace pvm

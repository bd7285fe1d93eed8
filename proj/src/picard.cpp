#include "pvm/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pvm/domain.hpp"
#include "pvm/errors.hpp"

namespace pvm {

std::vector<double> slice_times(double T, int n_t) {
  if (!(T > 0) || !std::isfinite(T)) throw DomainError("slice_times: T must be finite and > 0");
  if (n_t < 2) throw DomainError("slice_times: need n_t >= 2");
  std::vector<double> t(static_cast<std::size_t>(n_t));
  for (int i = 0; i < n_t; ++i) t[static_cast<std::size_t>(i)] = T * i / (n_t - 1);
  return t;
}

PicardState constant_state(const SpectralField3& v0, const SpectralField3& omega0,
                           std::span<const double> times) {
  require_same_grid(v0.grid(), omega0.grid(), "constant_state");
  PicardState u;
  u.times.assign(times.begin(), times.end());
  u.v.assign(times.size(), v0);
  u.omega.assign(times.size(), omega0);
  return u;
}

double x_norm(const PicardState& u, int s) {
  double sv = 0.0;
  double sw = 0.0;
  for (const auto& v : u.v) sv = std::max(sv, sobolev_norm(v, s + 1));
  for (const auto& w : u.omega) sw = std::max(sw, sobolev_norm(w, s));
  return sv + sw;
}

double x_distance(const PicardState& a, const PicardState& b, int s) {
  if (a.size() != b.size() || a.v.size() != b.v.size() || a.omega.size() != b.omega.size())
    throw DomainError("x_distance: states have different slice counts");
  double sv = 0.0;
  double sw = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) sv = std::max(sv, sobolev_norm(a.v[i] - b.v[i], s + 1));
  for (std::size_t i = 0; i < a.omega.size(); ++i)
    sw = std::max(sw, sobolev_norm(a.omega[i] - b.omega[i], s));
  return sv + sw;
}

double HorizonSelection::constraint_lhs(double nu, double gamma) const {
  const double g = heat_growth_factor(nu, gamma, T);
  return 8.0 * C_gs * T * g * (omega0_norm + 2.0 * T * v0_norm);
}

HorizonSelection select_horizon(const SpectralField3& v0, const SpectralField3& omega0, double C_gs,
                                const ModelParams& params) {
  if (!(C_gs >= 1.0)) throw DomainError("select_horizon: C_gs must be >= 1 (run the calibration first)");
  require_same_grid(v0.grid(), omega0.grid(), "select_horizon");
  HorizonSelection h;
  h.C_gs = C_gs;
  h.v0_norm = sobolev_norm(v0, params.s + 1);
  h.omega0_norm = sobolev_norm(omega0, params.s);
  if (!std::isfinite(h.v0_norm) || !std::isfinite(h.omega0_norm))
    throw NonFiniteError("select_horizon: initial data norms are not finite");
  h.growth = heat_growth_factor(params.nu, params.gamma, 1.0);
  const double cg = C_gs * h.growth;
  const double data = h.omega0_norm + 2.0 * h.v0_norm;
  h.M = 2.0 * h.v0_norm + cg * data;
  const double inf = std::numeric_limits<double>::infinity();
  h.terms[0] = data > 0 ? 1.0 / (8.0 * cg * data) : inf;
  h.terms[1] = 1.0 / (2.0 * cg);
  h.terms[2] = h.M > 0 ? 1.0 / (2.0 * h.M) : inf;
  h.terms[3] = 1.0;
  if (h.M == 0.0) {
    h.T = 1.0;
    h.binding_term = "unit cap";
    return h;
  }
  static const char* names[4] = {"data term", "heat constant term", "ball radius term", "unit cap"};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (h.terms[i] < h.terms[best]) best = i;
  h.T = h.terms[best];
  h.binding_term = names[best];
  return h;
}

std::vector<SpectralField3> duhamel_history(std::span<const SpectralField3> g_slices,
                                            const SpectralField3& omega0,
                                            std::span<const double> times,
                                            const RobinPropagator& propagator) {
  const std::size_t n = times.size();
  if (n == 0) throw DomainError("duhamel: empty time grid");
  if (g_slices.size() != n) throw DomainError("duhamel: forcing slices do not match the time grid");
  require_same_grid(propagator.grid(), omega0.grid(), "duhamel");
  if (times.front() != 0.0) throw DomainError("duhamel: time grid must start at 0");
  std::vector<SpectralField3> out;
  out.reserve(n);
  out.push_back(omega0);
  if (n == 1) return out;

  const double dt = times[1] - times[0];
  if (!(dt > 0)) throw DomainError("duhamel: time grid must be increasing");
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(times[i] - dt * static_cast<double>(i)) > 1e-12 * std::max(1.0, times[i]))
      throw DomainError("duhamel: time grid must be uniform");

  std::vector<RobinModes> forcing;
  forcing.reserve(n);
  for (const auto& g : g_slices) {
    require_same_grid(propagator.grid(), g.grid(), "duhamel");
    forcing.push_back(propagator.transform(g));
  }
  const RobinModes initial = propagator.transform(omega0);
  std::vector<EvolutionFactors> lag;
  lag.reserve(n);
  for (std::size_t l = 0; l < n; ++l) lag.push_back(propagator.factors(dt * static_cast<double>(l)));

  RobinModes acc(propagator.grid());
  for (std::size_t i = 1; i < n; ++i) {
    acc.set_zero();
    propagator.evolve_into(initial, lag[i], 1.0, acc);
    for (std::size_t j = 0; j <= i; ++j) {
      const double w = (j == 0 || j == i) ? 0.5 * dt : dt;
      propagator.evolve_into(forcing[j], lag[i - j], w, acc);
    }
    out.push_back(propagator.reconstruct(acc));
  }
  return out;
}

SpectralField3 duhamel_apply(std::span<const SpectralField3> g_slices, const SpectralField3& omega0,
                             double t, const ModelParams& params) {
  if (!(t >= 0)) throw DomainError("duhamel_apply: negative time");
  if (g_slices.empty()) throw DomainError("duhamel_apply: no forcing slices");
  if (t == 0.0) {
    if (g_slices.size() != 1) throw DomainError("duhamel_apply: t = 0 needs exactly one slice");
    return omega0;
  }
  if (g_slices.size() < 2) throw DomainError("duhamel_apply: t > 0 needs at least two slices");
  const auto n = static_cast<int>(g_slices.size());
  const auto times = slice_times(t, n);
  const RobinPropagator prop(omega0.grid(), params);
  return duhamel_history(g_slices, omega0, times, prop).back();
}

PicardMap::PicardMap(const Grid& grid, const ModelParams& params, EllipticOptions elliptic)
    : params_(params), elliptic_(grid, params.beta, elliptic), propagator_(grid, params) {}

PicardState PicardMap::apply(const PicardState& state, const SpectralField3& v0,
                             const SpectralField3& omega0) const {
  const std::size_t n = state.size();
  if (n < 2 || state.v.size() != n || state.omega.size() != n)
    throw DomainError("picard_step: inconsistent state");
  const Grid& g = elliptic_.grid();
  require_same_grid(g, v0.grid(), "picard_step");
  require_same_grid(g, omega0.grid(), "picard_step");
  const double dt = state.times[1] - state.times[0];

  PicardState next;
  next.times = state.times;
  next.iteration = state.iteration + 1;
  next.v.reserve(n);
  next.v.push_back(v0);

  std::vector<SpectralField3> source;
  source.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const SpectralField3 psi_z = d_z(elliptic_.solve(state.omega[j]), 1);
    source.push_back(pointwise_product(state.v[j], psi_z));
  }
  SpectralField3 integral(g);
  for (std::size_t i = 1; i < n; ++i) {
    integral.axpy(0.5 * dt, source[i - 1]);
    integral.axpy(0.5 * dt, source[i]);
    SpectralField3 v = v0;
    v.axpy(4.0, integral);
    next.v.push_back(std::move(v));
  }

  std::vector<SpectralField3> forcing;
  forcing.reserve(n);
  for (const auto& v : state.v) forcing.push_back(d_z(v, 1));
  next.omega = duhamel_history(forcing, omega0, state.times, propagator_);
  return next;
}

PicardState picard_step(const PicardState& state, const SpectralField3& v0, const SpectralField3& omega0,
                        const ModelParams& params) {
  return PicardMap(v0.grid(), params).apply(state, v0, omega0);
}

PicardResult picard_solve(const SpectralField3& v0, const SpectralField3& omega0, const ModelParams& params,
                          const HorizonSelection& horizon, int n_t, const PicardOptions& options,
                          const std::optional<PicardState>& guess) {
  if (!(options.tol > 0)) throw DomainError("picard_solve: tol must be > 0");
  if (options.max_iter < 1) throw DomainError("picard_solve: max_iter must be >= 1");
  require_same_grid(v0.grid(), omega0.grid(), "picard_solve");
  const int s = params.s;

  PicardResult result;
  PicardDiagnostics& diag = result.diagnostics;
  diag.M = horizon.M;

  const double defect = boundary_structure_defect(v0);
  if (defect > 1e-2) {
    std::ostringstream msg;
    msg << "picard_solve: v0 does not vanish to second order on Gamma (defect " << defect << ")";
    throw DomainError(msg.str());
  }
  const double scale = sobolev_norm(omega0, 1);
  const double resid = boundary_residual(omega0, params.gamma);
  if (scale > 0 && resid > 1e-2 * scale) {
    std::ostringstream msg;
    msg << "initial vorticity violates the Robin condition at z = 0 (residual " << resid << ")";
    diag.warnings.push_back(msg.str());
  }

  const auto times = slice_times(horizon.T, n_t);
  PicardState u = guess ? *guess : constant_state(v0, omega0, times);
  if (u.size() != times.size()) throw DomainError("picard_solve: initial guess has the wrong slice count");
  u.times = times;
  u.v.front() = v0;
  u.omega.front() = omega0;
  u.iteration = 0;

  const PicardMap map(v0.grid(), params, options.elliptic);
  diag.x_norms.push_back(x_norm(u, s));
  for (int k = 1; k <= options.max_iter; ++k) {
    PicardState next = map.apply(u, v0, omega0);
    const double xn = x_norm(next, s);
    if (!std::isfinite(xn)) throw NonFiniteError("picard_solve: iterate " + std::to_string(k) + " is not finite");
    if (horizon.M > 0 && xn > options.divergence_factor * horizon.M) {
      std::ostringstream msg;
      msg << "picard_solve: iterate " << k << " has X-norm " << xn << " above " << options.divergence_factor
          << " M = " << options.divergence_factor * horizon.M;
      throw DivergenceError(msg.str());
    }
    const double d = x_distance(next, u, s);
    diag.x_norms.push_back(xn);
    diag.differences.push_back(d);
    if (diag.differences.size() >= 2) {
      const double prev = diag.differences[diag.differences.size() - 2];
      diag.ratios.push_back(prev > 0 ? d / prev : (d > 0 ? std::numeric_limits<double>::infinity() : 0.0));
    }
    u = std::move(next);
    diag.iterations = k;
    const double first = diag.differences.front();
    if (first == 0.0 || d <= options.tol * first) {
      diag.converged = true;
      break;
    }
  }
  if (!diag.converged && !diag.ratios.empty() && diag.ratios.back() > 1.0) {
    std::ostringstream msg;
    msg << "picard_solve: no convergence after " << diag.iterations << " iterations; ratios";
    for (double r : diag.ratios) msg << ' ' << r;
    throw NoConvergenceError(msg.str(), diag.ratios);
  }
  result.state = std::move(u);
  return result;
}

double boundary_structure_defect(const SpectralField3& v0) {
  const Grid& g = v0.grid();
  double peak = 0.0;
  for (double c : v0.data()) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const auto c = v0.profile(m);
    const double d1 = 0.5 * (-3.0 * c[0] + 4.0 * c[1] - c[2]);
    const double d2 = 2.0 * c[0] - 5.0 * c[1] + 4.0 * c[2] - c[3];
    worst = std::max({worst, std::abs(c[0]), std::abs(d1), std::abs(d2)});
  }
  return worst / peak;
}

std::vector<SpectralField3> recover_u(std::span<const SpectralField3> v_slices, const SpectralField3& u0,
                                      double sign_tol) {
  const double lo = collocated_min(u0);
  const double hi = -collocated_min(-1.0 * u0);
  if (lo < -sign_tol && hi > sign_tol)
    throw SignError("recover_u: u0 changes sign, the square root branch is ambiguous");
  const double sign = hi > sign_tol ? 1.0 : (lo < -sign_tol ? -1.0 : 1.0);
  std::vector<SpectralField3> out;
  out.reserve(v_slices.size());
  const int nodes = u0.grid().k_max();
  for (const auto& v : v_slices) {
    require_same_grid(u0.grid(), v.grid(), "recover_u");
    const SpectralField3* in[1] = {&v};
    out.push_back(collocate(in, nodes, [sign](std::span<const double> x) {
      return sign * std::sqrt(std::max(x[0], 0.0));
    }));
  }
  return out;
}

SpectralField3 square_field(const SpectralField3& u0) {
  const SpectralField3* in[1] = {&u0};
  return collocate(in, u0.grid().k_max(), [](std::span<const double> x) { return x[0] * x[0]; });
}

}  // namespace pvm

#include "pvm/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pvm/domain.hpp"
#include "pvm/errors.hpp"
#include "pvm/tridiagonal.hpp"

namespace pvm {

namespace {

void require_gamma(double gamma, const char* where) {
  if (!(gamma > 0) || !std::isfinite(gamma))
    throw DomainError(std::string(where) + ": the transform construction needs gamma > 0");
}

std::vector<double> robin_profile(const Grid& g, double gamma) {
  std::vector<double> e(static_cast<std::size_t>(g.n_z()));
  for (int j = 0; j < g.n_z(); ++j) e[static_cast<std::size_t>(j)] = std::exp(-gamma * g.z(j));
  return e;
}

// Discrete moment against e^{-gamma z}: trapezoid weights on the nodes
// 0..n-2; the last node (z = l_z) carries the truncated tail and is dropped.
double moment(std::span<const double> c, std::span<const double> e) {
  const std::size_t n = c.size();
  double num = 0.5 * e[0] * c[0];
  double den = 0.5 * e[0] * e[0];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    num += e[j] * c[j];
    den += e[j] * e[j];
  }
  return num / den;
}

// eta_j = E eta_{j+1} + c (f_j + E f_{j+1}), eta_{n-1} = 0, f_{n-1} = 0.
void forward_sweep(std::span<const double> f, std::span<double> eta, double gamma, double h) {
  const std::size_t n = f.size();
  const double E = std::exp(-gamma * h);
  const double c = 0.5 * gamma * h;
  eta[n - 1] = 0.0;
  double f_next = 0.0;
  for (std::size_t j = n - 1; j-- > 0;) {
    eta[j] = E * eta[j + 1] + c * (f[j] + E * f_next);
    f_next = f[j];
  }
}

// Inverse of forward_sweep given eta with eta_0 = eta_{n-1} = 0.
void inverse_sweep(std::span<const double> eta, std::span<double> f, double gamma, double h) {
  const std::size_t n = eta.size();
  const double E = std::exp(-gamma * h);
  const double inv_c = 2.0 / (gamma * h);
  f[n - 1] = 0.0;
  double f_next = 0.0;
  for (std::size_t j = n - 1; j-- > 0;) {
    f[j] = inv_c * (eta[j] - E * eta[j + 1]) - E * f_next;
    f_next = f[j];
  }
}

}  // namespace

Field2 zbar_moment(const SpectralField3& omega0, double gamma) {
  require_gamma(gamma, "zbar_moment");
  const Grid& g = omega0.grid();
  const auto e = robin_profile(g, gamma);
  Field2 out(g);
  for (std::size_t m = 0; m < g.mode_count(); ++m) out[m] = moment(omega0.profile(m), e);
  return out;
}

TransformBundle eta0_from_omega0(const SpectralField3& omega0, double gamma) {
  require_gamma(gamma, "eta0_from_omega0");
  const Grid& g = omega0.grid();
  const auto n = static_cast<std::size_t>(g.n_z());
  const auto e = robin_profile(g, gamma);
  TransformBundle b{SpectralField3(g), SpectralField3(g), zbar_moment(omega0, gamma), gamma};
  std::vector<double> f(n);
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const auto w = omega0.profile(m);
    for (std::size_t j = 0; j + 1 < n; ++j) f[j] = w[j] - b.omega_bar0[m] * e[j];
    f[n - 1] = 0.0;
    auto eta = b.eta0.profile(m);
    forward_sweep(f, eta, gamma, g.dz());
    auto eta_z = b.eta0_z.profile(m);
    for (std::size_t j = 0; j < n; ++j) eta_z[j] = gamma * (eta[j] - f[j]);
  }
  return b;
}

RobinModes::RobinModes(const Grid& grid)
    : interior_(static_cast<std::size_t>(grid.n_z() - 2)),
      eta_(grid.mode_count() * interior_, 0.0),
      xi_(grid.mode_count(), 0.0) {}

void RobinModes::axpy(double alpha, const RobinModes& x) {
  if (x.eta_.size() != eta_.size()) throw DomainError("RobinModes::axpy: size mismatch");
  for (std::size_t i = 0; i < eta_.size(); ++i) eta_[i] += alpha * x.eta_[i];
  for (std::size_t m = 0; m < xi_.size(); ++m) xi_[m] += alpha * x.xi_[m];
}

void RobinModes::set_zero() noexcept {
  std::fill(eta_.begin(), eta_.end(), 0.0);
  std::fill(xi_.begin(), xi_.end(), 0.0);
}

RobinPropagator::RobinPropagator(Grid grid, double nu, double gamma)
    : grid_(grid), nu_(nu), gamma_(gamma), sine_(grid.n_z() - 2) {
  require_gamma(gamma, "RobinPropagator");
  if (!(nu > 0)) throw DomainError("RobinPropagator: nu must be > 0");
  robin_profile_ = robin_profile(grid_, gamma_);
  kappa2_.resize(static_cast<std::size_t>(grid_.n_z() - 2));
  for (std::size_t i = 0; i < kappa2_.size(); ++i) {
    const double kappa = static_cast<double>(i + 1) * std::numbers::pi / grid_.l_z();
    kappa2_[i] = kappa * kappa;
  }
}

RobinModes RobinPropagator::transform(const SpectralField3& omega0) const {
  require_same_grid(grid_, omega0.grid(), "RobinPropagator::transform");
  const TransformBundle b = eta0_from_omega0(omega0, gamma_);
  RobinModes state(grid_);
  const std::size_t inner = state.interior();
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    state.xi(m) = b.omega_bar0[m];
    sine_.analyze(b.eta0.profile(m).subspan(1, inner), state.eta(m));
  }
  return state;
}

EvolutionFactors RobinPropagator::factors(double t) const {
  if (!(t >= 0)) throw DomainError("RobinPropagator: negative time");
  EvolutionFactors f;
  f.t = t;
  f.z_decay.resize(kappa2_.size());
  for (std::size_t i = 0; i < kappa2_.size(); ++i) f.z_decay[i] = std::exp(-nu_ * kappa2_[i] * t);
  f.mode_decay.resize(grid_.mode_count());
  f.xi_growth.resize(grid_.mode_count());
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    const double mu2 = grid_.mu2(m);
    f.mode_decay[m] = std::exp(-nu_ * mu2 * t);
    f.xi_growth[m] = std::exp(nu_ * (gamma_ * gamma_ - mu2) * t);
  }
  return f;
}

void RobinPropagator::evolve_into(const RobinModes& src, const EvolutionFactors& f, double weight,
                                  RobinModes& dst) const {
  const std::size_t inner = src.interior();
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    const double scale = weight * f.mode_decay[m];
    const auto in = src.eta(m);
    auto out = dst.eta(m);
    for (std::size_t i = 0; i < inner; ++i) out[i] += scale * f.z_decay[i] * in[i];
    dst.xi(m) += weight * f.xi_growth[m] * src.xi(m);
  }
}

RobinModes RobinPropagator::evolve(const RobinModes& src, double t) const {
  RobinModes out(grid_);
  evolve_into(src, factors(t), 1.0, out);
  return out;
}

SpectralField3 RobinPropagator::reconstruct(const RobinModes& state) const {
  const auto n = static_cast<std::size_t>(grid_.n_z());
  SpectralField3 omega(grid_);
  std::vector<double> eta(n, 0.0);
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    sine_.synthesize(state.eta(m), std::span<double>(eta).subspan(1, n - 2));
    eta[0] = 0.0;
    eta[n - 1] = 0.0;
    auto w = omega.profile(m);
    inverse_sweep(eta, w, gamma_, grid_.dz());
    const double xi = state.xi(m);
    for (std::size_t j = 0; j < n; ++j) w[j] += xi * robin_profile_[j];
  }
  return omega;
}

SpectralField3 RobinPropagator::propagate(const SpectralField3& omega0, double t) const {
  if (!(t >= 0)) throw DomainError("propagate_robin: negative time");
  require_same_grid(grid_, omega0.grid(), "RobinPropagator::propagate");
  if (t == 0.0) return omega0;
  return reconstruct(evolve(transform(omega0), t));
}

SpectralField3 propagate_robin(const SpectralField3& omega0, double t, const ModelParams& params,
                               std::vector<std::string>* warnings) {
  const RobinPropagator prop(omega0.grid(), params);
  if (warnings) {
    const double scale = sobolev_norm(omega0, 1);
    const double resid = boundary_residual(omega0, params.gamma);
    if (scale > 0 && resid > 1e-2 * scale) {
      std::ostringstream msg;
      msg << "initial vorticity violates the Robin condition at z = 0 (residual " << resid
          << ", H^1 norm " << scale << ")";
      warnings->push_back(msg.str());
    }
  }
  return prop.propagate(omega0, t);
}

FdRobinStepper::FdRobinStepper(Grid grid, double nu, double gamma, double dt)
    : grid_(grid), nu_(nu), gamma_(gamma), dt_(dt) {
  if (!(dt > 0)) throw DomainError("FdRobinStepper: dt must be > 0");
  if (!(nu > 0)) throw DomainError("FdRobinStepper: nu must be > 0");
}

void FdRobinStepper::advance(SpectralField3& omega, int steps) const {
  require_same_grid(grid_, omega.grid(), "FdRobinStepper::advance");
  if (steps < 0) throw DomainError("FdRobinStepper: negative step count");
  const std::size_t n = static_cast<std::size_t>(grid_.n_z()) - 1;  // unknowns 0..n_z-2
  const double h = grid_.dz();
  const double inv_h2 = 1.0 / (h * h);
  const double half = 0.5 * dt_ * nu_;
  std::vector<double> lower(n), diag(n), upper(n), rhs(n);
  std::vector<double> op_lower(n), op_diag(n), op_upper(n);
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    auto w = omega.profile(m);
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) continue;
    const double mu2 = grid_.mu2(m);
    // Spatial operator L (without nu): ghost value w_{-1} = w_1 + 2 h gamma w_0.
    std::fill(op_lower.begin(), op_lower.end(), inv_h2);
    std::fill(op_diag.begin(), op_diag.end(), -2.0 * inv_h2 - mu2);
    std::fill(op_upper.begin(), op_upper.end(), inv_h2);
    op_diag[0] = -2.0 * inv_h2 + 2.0 * gamma_ / h - mu2;
    op_upper[0] = 2.0 * inv_h2;
    for (std::size_t i = 0; i < n; ++i) {
      lower[i] = -half * op_lower[i];
      diag[i] = 1.0 - half * op_diag[i];
      upper[i] = -half * op_upper[i];
    }
    w[n] = 0.0;
    for (int step = 0; step < steps; ++step) {
      for (std::size_t i = 0; i < n; ++i) {
        double lw = op_diag[i] * w[i] + op_upper[i] * w[i + 1];
        if (i > 0) lw += op_lower[i] * w[i - 1];
        rhs[i] = w[i] + half * lw;
      }
      solve_tridiagonal(lower, diag, upper, rhs);
      std::copy(rhs.begin(), rhs.end(), w.begin());
    }
  }
}

SpectralField3 fd_robin_oracle(const SpectralField3& omega0, double t, const ModelParams& params,
                               int n_steps) {
  if (n_steps < 1) throw DomainError("fd_robin_oracle: n_steps must be >= 1");
  if (!(t >= 0)) throw DomainError("fd_robin_oracle: negative time");
  SpectralField3 omega = omega0;
  if (t == 0.0) return omega;
  FdRobinStepper(omega0.grid(), params.nu, params.gamma, t / n_steps).advance(omega, n_steps);
  return omega;
}

double boundary_residual(const SpectralField3& omega, double gamma) {
  const Grid& g = omega.grid();
  std::vector<double> r(g.mode_count());
  const double h = g.dz();
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const auto w = omega.profile(m);
    const double wz = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
    r[m] = wz + gamma * w[0];
  }
  return lateral_l2(g, r);
}

double heat_growth_factor(double nu, double gamma, double t) {
  return gamma > 0 ? std::exp(nu * gamma * gamma * t) : 1.0;
}

double calibrate_Cgs(std::span<const SpectralField3> ensemble, int s, std::span<const double> t_grid,
                     const ModelParams& params) {
  if (ensemble.empty()) throw DomainError("calibrate_Cgs: empty ensemble");
  if (t_grid.empty()) throw DomainError("calibrate_Cgs: empty time grid");
  for (double t : t_grid)
    if (!(t >= 0)) throw DomainError("calibrate_Cgs: negative time");
  const RobinPropagator prop(ensemble.front().grid(), params);
  double worst = 0.0;
  for (const SpectralField3& w0 : ensemble) {
    const double n0 = sobolev_norm(w0, s);
    if (!(n0 > 0)) continue;
    const RobinModes state = prop.transform(w0);
    for (double t : t_grid) {
      const SpectralField3 w = t == 0.0 ? w0 : prop.reconstruct(prop.evolve(state, t));
      const double ratio = sobolev_norm(w, s) / (heat_growth_factor(params.nu, params.gamma, t) * n0);
      worst = std::max(worst, ratio);
    }
  }
  return worst;
}

double calibrate_Cgs(const Grid& grid, const ModelParams& params, int ensemble_size, int s,
                     std::span<const double> t_grid, std::uint64_t seed, const RandomFieldOptions& fields) {
  if (ensemble_size <= 0) throw DomainError("calibrate_Cgs: empty ensemble");
  RandomFieldOptions opts = fields;
  if (!opts.robin_gamma) opts.robin_gamma = params.gamma;
  const auto ensemble = sample_all(random_ensemble(seed, ensemble_size, opts), grid);
  return calibrate_Cgs(ensemble, s, t_grid, params);
}

}  // namespace pvm

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pvm/families.hpp"
#include "pvm/field.hpp"
#include "pvm/grid.hpp"
#include "pvm/transforms.hpp"

namespace pvm {

/// Data of the transform construction for one initial field.
struct TransformBundle {
  SpectralField3 eta0;    ///< Dirichlet heat data, eta0(0) = 0
  SpectralField3 eta0_z;  ///< gamma (eta0 - f)
  Field2 omega_bar0;      ///< weighted moment of omega0 against e^{-gamma z}
  double gamma;
};

/// omega_bar0 = 2 gamma int_0^inf omega0 e^{-gamma z} dz, discretised by the
/// trapezoid rule on [0, l_z) and normalised with the same rule applied to
/// e^{-2 gamma z}. The normalisation makes the pure Robin profile e^{-gamma z}
/// have moment exactly 1 and makes omega0 - omega_bar0 e^{-gamma z}
/// orthogonal to e^{-gamma z} in the discrete inner product.
Field2 zbar_moment(const SpectralField3& omega0, double gamma);

/// Forms f = omega0 - omega_bar0 e^{-gamma z} and evaluates
/// eta0(z) = gamma int_z^inf e^{-gamma (z'-z)} f(z') dz' by the backward sweep
///   eta0_j = E eta0_{j+1} + (gamma dz / 2)(f_j + E f_{j+1}),  E = e^{-gamma dz},
/// starting from eta0 = 0 at z = l_z (f is truncated to zero there).
TransformBundle eta0_from_omega0(const SpectralField3& omega0, double gamma);

/// Spectral state of the transform construction: for every lateral mode the
/// z-sine coefficients of eta on the interior nodes and the scalar xi.
class RobinModes {
 public:
  explicit RobinModes(const Grid& grid);

  std::size_t interior() const noexcept { return interior_; }
  std::span<double> eta(std::size_t m) noexcept { return {eta_.data() + m * interior_, interior_}; }
  std::span<const double> eta(std::size_t m) const noexcept {
    return {eta_.data() + m * interior_, interior_};
  }
  double& xi(std::size_t m) noexcept { return xi_[m]; }
  double xi(std::size_t m) const noexcept { return xi_[m]; }

  void axpy(double alpha, const RobinModes& x);
  void set_zero() noexcept;

 private:
  std::size_t interior_;
  std::vector<double> eta_;
  std::vector<double> xi_;
};

/// Exponential factors of the propagator for one elapsed time.
struct EvolutionFactors {
  double t = 0.0;
  std::vector<double> z_decay;     ///< e^{-nu (m pi / l_z)^2 t}, m = 1..n_z-2
  std::vector<double> mode_decay;  ///< e^{-nu mu_k^2 t}
  std::vector<double> xi_growth;   ///< e^{nu (gamma^2 - mu_k^2) t}
};

/// Robin heat propagator P(.; 0, t) for omega_t = nu Lap omega with
/// omega = 0 on the lateral walls and (omega_z + gamma omega)|_Gamma = 0,
/// built from the transform omega = -(1/gamma) eta_z + eta + xi e^{-gamma z}:
/// eta solves the all-Dirichlet heat equation (exact sine propagator) and xi
/// solves xi_t = nu (Lap_x + gamma^2) xi (exact per-mode exponential).
///
/// Reconstruction inverts the eta0 sweep, so the discrete -(1/gamma) eta_z + eta
/// is the derivative consistent with the sweep. transform() followed by
/// reconstruct() reproduces omega0 on [0, l_z) up to rounding, and
/// reconstruct() followed by transform() is the identity, which makes the
/// discrete propagator an exact semigroup.
class RobinPropagator {
 public:
  RobinPropagator(Grid grid, double nu, double gamma);
  RobinPropagator(Grid grid, const ModelParams& params) : RobinPropagator(grid, params.nu, params.gamma) {}

  const Grid& grid() const noexcept { return grid_; }
  double nu() const noexcept { return nu_; }
  double gamma() const noexcept { return gamma_; }

  RobinModes transform(const SpectralField3& omega0) const;
  EvolutionFactors factors(double t) const;
  /// dst += weight * E(t) src
  void evolve_into(const RobinModes& src, const EvolutionFactors& f, double weight, RobinModes& dst) const;
  RobinModes evolve(const RobinModes& src, double t) const;
  SpectralField3 reconstruct(const RobinModes& state) const;

  /// omega(t); t = 0 returns omega0 unchanged.
  SpectralField3 propagate(const SpectralField3& omega0, double t) const;

 private:
  Grid grid_;
  double nu_;
  double gamma_;
  SineTransform sine_;
  std::vector<double> robin_profile_;  // e^{-gamma z_j}
  std::vector<double> kappa2_;         // (m pi / l_z)^2
};

/// Free-function form. If `warnings` is given, a note is appended when omega0
/// violates the Robin compatibility condition (the propagation still runs).
SpectralField3 propagate_robin(const SpectralField3& omega0, double t, const ModelParams& params,
                               std::vector<std::string>* warnings = nullptr);

/// Crank-Nicolson stepper for the per-mode problem
/// w_t = nu (w'' - mu^2 w), ghost-point Robin at z = 0, w(l_z) = 0.
class FdRobinStepper {
 public:
  FdRobinStepper(Grid grid, double nu, double gamma, double dt);
  void advance(SpectralField3& omega, int steps) const;

 private:
  Grid grid_;
  double nu_;
  double gamma_;
  double dt_;
};

/// Independent oracle for the Robin heat problem; n_steps CN steps to time t.
SpectralField3 fd_robin_oracle(const SpectralField3& omega0, double t, const ModelParams& params,
                               int n_steps);

/// ||(omega_z + gamma omega)|_{z=0}||_{L^2(Omega_x)} with the one-sided
/// second-order derivative.
double boundary_residual(const SpectralField3& omega, double gamma);

/// Growth factor of the heat estimate; 1 for gamma <= 0 (no growing mode).
double heat_growth_factor(double nu, double gamma, double t);

/// max over ensemble x t_grid of ||omega(t)||_{H^s} / (e^{nu gamma^2 t} ||omega0||_{H^s}).
double calibrate_Cgs(std::span<const SpectralField3> ensemble, int s, std::span<const double> t_grid,
                     const ModelParams& params);
double calibrate_Cgs(const Grid& grid, const ModelParams& params, int ensemble_size, int s,
                     std::span<const double> t_grid, std::uint64_t seed,
                     const RandomFieldOptions& fields = {});

}  // namespace pvm

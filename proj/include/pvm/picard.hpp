#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvm/elliptic.hpp"
#include "pvm/field.hpp"
#include "pvm/grid.hpp"
#include "pvm/heat.hpp"

namespace pvm {

/// One iterate U = (v, omega) as histories on the uniform slice grid
/// t_i = i T / (n_t - 1).
struct PicardState {
  std::vector<double> times;
  std::vector<SpectralField3> v;
  std::vector<SpectralField3> omega;
  int iteration = 0;

  std::size_t size() const noexcept { return times.size(); }
};

std::vector<double> slice_times(double T, int n_t);

/// The constant initial guess U^0(t) = (v0, omega0).
PicardState constant_state(const SpectralField3& v0, const SpectralField3& omega0,
                           std::span<const double> times);

/// sup_i ||v_i||_{H^{s+1}} + sup_i ||omega_i||_{H^s}.
double x_norm(const PicardState& u, int s);
double x_distance(const PicardState& a, const PicardState& b, int s);

struct HorizonSelection {
  double T = 1.0;
  double M = 0.0;
  double C_gs = 1.0;
  double growth = 1.0;  ///< e^{nu gamma^2}, or 1 for gamma <= 0
  double v0_norm = 0.0;
  double omega0_norm = 0.0;
  double terms[4] = {0, 0, 0, 1.0};
  std::string binding_term;

  /// 8 C T e^{nu gamma^2 T} (||omega0|| + 2 T ||v0||); at most 1 for a valid T.
  double constraint_lhs(double nu, double gamma) const;
};

/// M = 2||v0||_{H^{s+1}} + C e^{nu gamma^2} (||omega0||_{H^s} + 2||v0||_{H^{s+1}}),
/// T = min{[8 C e^{nu gamma^2}(||omega0|| + 2||v0||)]^{-1}, [2 C e^{nu gamma^2}]^{-1},
///         1/(2M), 1}.
/// Zero data gives T = 1 with binding term "unit cap".
HorizonSelection select_horizon(const SpectralField3& v0, const SpectralField3& omega0, double C_gs,
                                const ModelParams& params);

/// Duhamel operator on the slice grid: returns for every slice time
///   P(omega0; t_i) + int_0^{t_i} P(g(t'); t_i - t') dt'
/// with the composite trapezoid rule over the slices t_j <= t_i.
/// Slice 0 is omega0 itself.
std::vector<SpectralField3> duhamel_history(std::span<const SpectralField3> g_slices,
                                            const SpectralField3& omega0,
                                            std::span<const double> times,
                                            const RobinPropagator& propagator);

/// Single-time form: g_slices sampled uniformly on [0, t], g_slices.back() at t.
SpectralField3 duhamel_apply(std::span<const SpectralField3> g_slices, const SpectralField3& omega0,
                             double t, const ModelParams& params);

/// The Picard map on a fixed slice grid.
class PicardMap {
 public:
  PicardMap(const Grid& grid, const ModelParams& params, EllipticOptions elliptic = {});

  const ModelParams& params() const noexcept { return params_; }
  const EllipticSolver& elliptic() const noexcept { return elliptic_; }
  const RobinPropagator& propagator() const noexcept { return propagator_; }

  /// v(t_i) = v0 + 4 trap_{t_j <= t_i}[v~ K(omega~)_z],  omega(t_i) = L(v~_z, omega0)(t_i).
  PicardState apply(const PicardState& state, const SpectralField3& v0,
                    const SpectralField3& omega0) const;

 private:
  ModelParams params_;
  EllipticSolver elliptic_;
  RobinPropagator propagator_;
};

PicardState picard_step(const PicardState& state, const SpectralField3& v0, const SpectralField3& omega0,
                        const ModelParams& params);

struct PicardOptions {
  double tol = 1e-8;
  int max_iter = 30;
  /// Abort when an iterate's X-norm exceeds divergence_factor * M (M > 0).
  double divergence_factor = 10.0;
  EllipticOptions elliptic;
};

struct PicardDiagnostics {
  std::vector<double> differences;  ///< ||U^k - U^{k-1}||_X, k = 1..
  std::vector<double> ratios;       ///< differences[k] / differences[k-1], k >= 1
  std::vector<double> x_norms;      ///< ||U^k||_X, k = 0..
  int iterations = 0;
  bool converged = false;
  double M = 0.0;
  std::vector<std::string> warnings;
};

struct PicardResult {
  PicardState state;
  PicardDiagnostics diagnostics;
};

/// Iterates the map from `guess` (or the constant state) until
/// ||U^{k+1} - U^k||_X <= tol ||U^1 - U^0||_X. Throws NoConvergenceError if
/// max_iter is reached with the last ratio above 1, DivergenceError past the
/// divergence guard and NonFiniteError on non-finite norms.
PicardResult picard_solve(const SpectralField3& v0, const SpectralField3& omega0, const ModelParams& params,
                          const HorizonSelection& horizon, int n_t, const PicardOptions& options = {},
                          const std::optional<PicardState>& guess = std::nullopt);

/// Largest grid-scaled boundary value of v0, v0_z, v0_zz on Gamma relative to
/// max |v0|; v0 has the V^{s+1} structure when this is small.
double boundary_structure_defect(const SpectralField3& v0);

/// u(t) = sqrt(max(v(t), 0)) on the interpolating collocation nodes, with the
/// sign of u0. Throws SignError if u0 changes sign.
std::vector<SpectralField3> recover_u(std::span<const SpectralField3> v_slices, const SpectralField3& u0,
                                      double sign_tol = 1e-12);

/// u0^2 on the interpolating collocation nodes, so recover_u is its inverse.
SpectralField3 square_field(const SpectralField3& u0);

}  // namespace pvm

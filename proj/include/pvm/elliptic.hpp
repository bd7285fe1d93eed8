#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pvm/families.hpp"
#include "pvm/field.hpp"

namespace pvm {

struct AdmissibilityReport {
  double beta = 0.0;
  double tolerance = 1e-8;
  std::vector<Mode> offending_modes;  ///< |beta - pi|k|/a| < tolerance
  double min_gap = 0.0;               ///< min over resolved modes of |beta - pi|k|/a|

  bool admissible() const noexcept { return offending_modes.empty(); }
};

AdmissibilityReport check_admissible(double beta, const Grid& grid, double tolerance = 1e-8);

struct EllipticOptions {
  double resonance_tol = 1e-8;
  double condition_cap = 1e12;
};

/// The solution operator K of  -Lap v = f,  v = 0 on the lateral walls and at
/// z = l_z,  v_z + beta v = 0 on Gamma. Per lateral mode this is the two-point
/// problem -v'' + mu^2 v = f with a ghost-point Robin row at z = 0.
class EllipticSolver {
 public:
  /// Throws ResonanceError if beta is inside the resonance window of a
  /// resolved mode.
  EllipticSolver(Grid grid, double beta, EllipticOptions options = {});

  const Grid& grid() const noexcept { return grid_; }
  double beta() const noexcept { return beta_; }

  SpectralField3 solve(const SpectralField3& f) const;
  /// Largest per-mode condition estimate over all resolved modes.
  double condition_estimate() const noexcept { return condition_; }

 private:
  Grid grid_;
  double beta_;
  EllipticOptions options_;
  double condition_ = 0.0;
};

SpectralField3 solve_elliptic(const SpectralField3& f, double beta, const EllipticOptions& options = {});

/// Applies the discrete operator -Lap_h (mode-wise -D2 + mu^2 with the same
/// Robin closure) to v; used for residual checks.
SpectralField3 apply_discrete_laplacian(const SpectralField3& v, double beta);

/// ||-Lap_h v - f|| / ||f|| in L^2 over the unknown rows (z < l_z); 0 for f = 0.
double elliptic_residual(const SpectralField3& v, const SpectralField3& f, double beta);

/// ||(v_z + beta v)|_Gamma||_{L^2(Omega_x)} with the one-sided z derivative.
double robin_residual(const SpectralField3& v, double beta);

/// max over the ensemble of ||K f||_{H^s} / ||f||_{H^{s-2}}.
double calibrate_Cs(std::span<const SpectralField3> ensemble, int s, double beta,
                    const EllipticOptions& options = {});
double calibrate_Cs(const Grid& grid, double beta, int ensemble_size, int s, std::uint64_t seed,
                    const RandomFieldOptions& fields = {}, const EllipticOptions& options = {});

}  // namespace pvm

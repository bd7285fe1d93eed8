#include "pvm/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pvm/domain.hpp"
#include "pvm/errors.hpp"
#include "pvm/tridiagonal.hpp"

namespace pvm {

AdmissibilityReport check_admissible(double beta, const Grid& grid, double tolerance) {
  AdmissibilityReport report;
  report.beta = beta;
  report.tolerance = tolerance;
  report.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < grid.mode_count(); ++m) {
    const double gap = std::abs(beta - std::sqrt(grid.mu2(m)));
    report.min_gap = std::min(report.min_gap, gap);
    if (gap < tolerance) report.offending_modes.push_back(grid.mode(m));
  }
  return report;
}

namespace {

struct ModeSystem {
  std::vector<double> lower, diag, upper;
};

// Unknowns v_0 .. v_{n-2}; v_{n-1} = 0. Row 0 eliminates the ghost value
// v_{-1} = v_1 + 2 dz beta v_0.
ModeSystem assemble(const Grid& g, double mu2, double beta) {
  const std::size_t n = static_cast<std::size_t>(g.n_z()) - 1;
  const double h = g.dz();
  const double inv_h2 = 1.0 / (h * h);
  ModeSystem sys{std::vector<double>(n, -inv_h2), std::vector<double>(n, 2.0 * inv_h2 + mu2),
                 std::vector<double>(n, -inv_h2)};
  sys.diag[0] = 2.0 * inv_h2 - 2.0 * beta / h + mu2;
  sys.upper[0] = -2.0 * inv_h2;
  return sys;
}

std::string describe_modes(const std::vector<Mode>& modes) {
  std::ostringstream out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) out << ", ";
    out << '(' << modes[i].k1 << ',' << modes[i].k2 << ')';
  }
  return out.str();
}

}  // namespace

EllipticSolver::EllipticSolver(Grid grid, double beta, EllipticOptions options)
    : grid_(grid), beta_(beta), options_(options) {
  if (!std::isfinite(beta)) throw DomainError("elliptic: beta must be finite");
  const AdmissibilityReport adm = check_admissible(beta, grid_, options_.resonance_tol);
  if (!adm.admissible()) {
    std::vector<std::pair<int, int>> modes;
    for (const Mode& k : adm.offending_modes) modes.emplace_back(k.k1, k.k2);
    std::ostringstream msg;
    msg << "beta = " << beta << " resonates with lateral mode(s) " << describe_modes(adm.offending_modes)
        << " (|beta - pi|k|/a| < " << options_.resonance_tol << ")";
    throw ResonanceError(msg.str(), std::move(modes));
  }
  const std::size_t n = static_cast<std::size_t>(grid_.n_z()) - 1;
  std::vector<double> probe(n, 0.0);
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    const ModeSystem sys = assemble(grid_, grid_.mu2(m), beta_);
    std::fill(probe.begin(), probe.end(), 0.0);
    const double cond = solve_tridiagonal(sys.lower, sys.diag, sys.upper, probe);
    if (!(cond <= options_.condition_cap)) {
      const Mode k = grid_.mode(m);
      std::ostringstream msg;
      msg << "elliptic system for mode (" << k.k1 << ',' << k.k2 << ") is singular to working precision"
          << " (condition estimate " << cond << " > cap " << options_.condition_cap << ")";
      throw SingularSystemError(msg.str());
    }
    condition_ = std::max(condition_, cond);
  }
}

SpectralField3 EllipticSolver::solve(const SpectralField3& f) const {
  require_same_grid(grid_, f.grid(), "EllipticSolver::solve");
  if (!f.is_finite()) throw NonFiniteError("elliptic: non-finite right-hand side");
  const std::size_t n = static_cast<std::size_t>(grid_.n_z()) - 1;
  SpectralField3 v(grid_);
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    const ModeSystem sys = assemble(grid_, grid_.mu2(m), beta_);
    auto rhs = f.profile(m);
    auto out = v.profile(m);
    std::copy_n(rhs.begin(), n, out.begin());
    solve_tridiagonal(sys.lower, sys.diag, sys.upper, out.first(n));
    out[n] = 0.0;
  }
  return v;
}

SpectralField3 solve_elliptic(const SpectralField3& f, double beta, const EllipticOptions& options) {
  return EllipticSolver(f.grid(), beta, options).solve(f);
}

SpectralField3 apply_discrete_laplacian(const SpectralField3& v, double beta) {
  const Grid& g = v.grid();
  const std::size_t n = static_cast<std::size_t>(g.n_z()) - 1;
  SpectralField3 out(g);
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const ModeSystem sys = assemble(g, g.mu2(m), beta);
    auto x = v.profile(m);
    auto y = out.profile(m);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = sys.diag[i] * x[i] + sys.upper[i] * x[i + 1];
      if (i > 0) acc += sys.lower[i] * x[i - 1];
      y[i] = acc;
    }
  }
  return out;
}

double elliptic_residual(const SpectralField3& v, const SpectralField3& f, double beta) {
  require_same_grid(v.grid(), f.grid(), "elliptic_residual");
  const Grid& g = v.grid();
  const SpectralField3 lv = apply_discrete_laplacian(v, beta);
  const auto last = static_cast<std::size_t>(g.n_z()) - 1;
  SpectralField3 r = lv - f;
  SpectralField3 ref = f;
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    r.profile(m)[last] = 0.0;
    ref.profile(m)[last] = 0.0;
  }
  const double denom = l2_norm(ref);
  return denom > 0 ? l2_norm(r) / denom : l2_norm(r);
}

double robin_residual(const SpectralField3& v, double beta) {
  const Grid& g = v.grid();
  std::vector<double> r(g.mode_count());
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const auto c = v.profile(m);
    r[m] = (-3.0 * c[0] + 4.0 * c[1] - c[2]) / (2.0 * g.dz()) + beta * c[0];
  }
  return lateral_l2(g, r);
}

double calibrate_Cs(std::span<const SpectralField3> ensemble, int s, double beta,
                    const EllipticOptions& options) {
  if (ensemble.empty()) throw DomainError("calibrate_Cs: empty ensemble");
  if (s < 2) throw DomainError("calibrate_Cs: s must be >= 2");
  const EllipticSolver solver(ensemble.front().grid(), beta, options);
  double worst = 0.0;
  for (const SpectralField3& f : ensemble) {
    const double denom = sobolev_norm(f, s - 2);
    if (!(denom > 0)) continue;
    worst = std::max(worst, sobolev_norm(solver.solve(f), s) / denom);
  }
  return worst;
}

double calibrate_Cs(const Grid& grid, double beta, int ensemble_size, int s, std::uint64_t seed,
                    const RandomFieldOptions& fields, const EllipticOptions& options) {
  if (ensemble_size <= 0) throw DomainError("calibrate_Cs: empty ensemble");
  const auto ensemble = sample_all(random_ensemble(seed, ensemble_size, fields), grid);
  return calibrate_Cs(ensemble, s, beta, options);
}

}  // namespace pvm

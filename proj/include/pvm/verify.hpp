#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pvm/families.hpp"
#include "pvm/field.hpp"
#include "pvm/heat.hpp"
#include "pvm/picard.hpp"

namespace pvm {

struct Certificate {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::optional<double> margin;  ///< bound / measured - 1; empty when measured = 0 or undefined
  bool passed = false;
  std::string detail;

  bool operator==(const Certificate&) const = default;
};

/// passed = measured <= bound; non-finite measured values fail.
Certificate make_certificate(std::string name, double measured, double bound, std::string detail = {});

/// Least-squares slope of log(error) against log(h). Needs at least two
/// positive errors.
double observed_order(std::span<const double> h, std::span<const double> errors);

/// E(t_{i+1}) <= E(t_i) e^{4 nu gamma^2 (t_{i+1} - t_i)} (1 + 1e-6) on every
/// adjacent pair; measured is the largest ratio of the two sides.
Certificate gronwall_energy_check(std::span<const double> times, std::span<const double> energies,
                                  const ModelParams& params);
Certificate gronwall_energy_check(std::span<const std::pair<double, SpectralField3>> series,
                                  const ModelParams& params);

/// E(t) = ||omega(t)||_{L^2}^2 on a time series.
std::vector<double> energies(std::span<const SpectralField3> series);

/// A propagated heat run on a list of times.
struct HeatRun {
  std::vector<double> times;
  std::vector<SpectralField3> omega;
};
HeatRun heat_run(const SpectralField3& omega0, std::span<const double> times, const RobinPropagator& prop);

/// max over runs and times of ||omega(t)||_{H^s} e^{-nu gamma^2 t} / ||omega0||_{H^s}
/// against 1.1 C_gs.
Certificate growth_bound_check(std::span<const SpectralField3> ensemble, std::span<const double> t_grid,
                               double C_gs, int s, const ModelParams& params);

/// max contraction ratio against 0.55. A run whose first difference is zero
/// passes vacuously.
Certificate contraction_check(const PicardDiagnostics& diagnostics);

/// sup ||v||_{H^{s+1}} <= 1.1 * 2 ||v0||_{H^{s+1}}.
Certificate apriori_v_check(const PicardState& state, const HorizonSelection& horizon, int s);
/// sup ||omega||_{H^s} <= 1.1 C e^{nu gamma^2 T} (||omega0||_{H^s} + 2 T ||v0||_{H^{s+1}}).
Certificate apriori_w_check(const PicardState& state, const HorizonSelection& horizon, const ModelParams& params);

/// 8 C T e^{nu gamma^2 T}(||omega0|| + 2 T ||v0||) <= 1.
Certificate horizon_constraint_check(const HorizonSelection& horizon, const ModelParams& params);

/// ||Phi(U) - U||_X <= 2 tol.
Certificate fixed_point_residual_check(const PicardMap& map, const PicardState& state, const SpectralField3& v0,
                                       const SpectralField3& omega0, double tol);

/// Second solve from the guess (v0, guess_scale * omega0) on t > 0;
/// X-distance of the two limits against 10 tol.
Certificate uniqueness_model_check(const SpectralField3& v0, const SpectralField3& omega0,
                                   const ModelParams& params, const HorizonSelection& horizon, int n_t,
                                   const PicardOptions& options, const PicardState& reference,
                                   double guess_scale = 1.1);

/// max over a held-out ensemble of ||K f||_{H^s} / ||f||_{H^{s-2}} against 1.1 C_s.
Certificate elliptic_bound_check(std::span<const SpectralField3> ensemble, double C_s, int s, double beta,
                                 const EllipticOptions& options = {});

/// max over the pairs (f_i, f_{i+1}) of product_ratio against 1.05 c.
Certificate product_inequality_check(std::span<const SpectralField3> ensemble, double c, int s);

/// max over consecutive pairs of product_ratio; the working constant c.
double calibrate_product_constant(std::span<const SpectralField3> ensemble, int s);

/// Transform propagator against the Crank-Nicolson oracle at time t:
/// max relative L^2 difference against `bound`.
Certificate uniqueness_heat_check(std::span<const SpectralField3> ensemble, double t, const ModelParams& params,
                                  int n_steps, double bound = 5e-3);

/// Joint refinement: for each n_z the difference between the two heat
/// solvers (n_steps scaled with n_z). measured = 1/order against 1/min_order.
Certificate uniqueness_heat_order_check(std::span<const FieldRecipe> recipes, double t, const ModelParams& params,
                                        const Grid& base, std::span<const int> n_z_levels, int base_steps,
                                        double min_order = 1.8);

/// Relative change of ||omega(t)||_{H^2} when k_max doubles, against 0.05.
Certificate smoothing_check(const FieldRecipe& omega0, double t, const ModelParams& params, const Grid& coarse,
                            double bound = 0.05);

/// Runs every registered check; an exception inside one check becomes a
/// failed certificate carrying the error message. Results are sorted by name.
class CertificateSuite {
 public:
  void add(std::string name, std::function<Certificate()> check);
  std::vector<Certificate> run() const;

 private:
  std::vector<std::pair<std::string, std::function<Certificate()>>> checks_;
};

bool all_passed(std::span<const Certificate> certs) noexcept;

}  // namespace pvm

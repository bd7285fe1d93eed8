#include "pvm/grid.hpp"

#include <cmath>
#include <sstream>

#include "pvm/errors.hpp"

namespace pvm {

void ModelParams::validate() const {
  if (!(std::isfinite(a) && a > 0)) throw ConfigError("params.a must be finite and > 0");
  if (!(std::isfinite(nu) && nu > 0)) throw ConfigError("params.nu must be finite and > 0");
  if (!std::isfinite(gamma)) throw ConfigError("params.gamma must be finite");
  if (!std::isfinite(beta)) throw ConfigError("params.beta must be finite");
  if (s < 2) throw ConfigError("params.s must be an integer >= 2");
}

void Discretization::validate() const {
  if (k_max < 1) throw ConfigError("disc.k_max must be >= 1");
  if (n_z < 8) throw ConfigError("disc.n_z must be >= 8");
  if (!(std::isfinite(l_z) && l_z > 0)) throw ConfigError("disc.l_z must be > 0");
  if (n_t < 2) throw ConfigError("disc.n_t must be >= 2");
  if (quad_nodes < 2) throw ConfigError("disc.quad_nodes must be >= 2");
  if (quad_nodes != 2)
    throw ConfigError("disc.quad_nodes: only the slice-node trapezoid rule (2) is supported");
}

Grid::Grid(double a, int k_max, int n_z, double l_z, int max_order)
    : a_(a), k_max_(k_max), n_z_(n_z), l_z_(l_z), dz_(0.0), max_order_(max_order) {
  if (!(a > 0)) throw DomainError("grid: a must be > 0");
  if (k_max < 1) throw DomainError("grid: k_max must be >= 1");
  if (n_z < 8) throw DomainError("grid: n_z must be >= 8");
  if (!(l_z > 0)) throw DomainError("grid: l_z must be > 0");
  if (max_order < 0) throw DomainError("grid: max_order must be >= 0");
  dz_ = l_z / (n_z - 1);
}

Grid Grid::make(const ModelParams& params, const Discretization& disc, double tail_tol,
                int max_order) {
  params.validate();
  disc.validate();
  Grid grid(params.a, disc.k_max, disc.n_z, disc.l_z, max_order);
  const double mu_min = std::sqrt(grid.mu2(1, 1));
  const double mode_tail = std::exp(-mu_min * disc.l_z);
  if (!(mode_tail < tail_tol)) {
    std::ostringstream msg;
    msg << "disc.l_z = " << disc.l_z << " too short: e^{-mu_min l_z} = " << mode_tail
        << " >= tail_tol " << tail_tol;
    throw ConfigError(msg.str());
  }
  if (params.gamma > 0) {
    const double robin_tail = std::exp(-params.gamma * disc.l_z);
    if (!(robin_tail < tail_tol)) {
      std::ostringstream msg;
      msg << "disc.l_z = " << disc.l_z << " too short: e^{-gamma l_z} = " << robin_tail
          << " >= tail_tol " << tail_tol;
      throw ConfigError(msg.str());
    }
  }
  return grid;
}

}  // namespace pvm

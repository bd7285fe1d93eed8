#pragma once

#include <cstddef>
#include <numbers>

namespace pvm {

/// Physical and analytic parameters of the partial-viscosity model.
struct ModelParams {
  double a = std::numbers::pi;  ///< side length of the cross-section (0,a)^2
  double nu = 1.0;              ///< viscosity
  double gamma = 1.0;           ///< Robin coefficient of omega at z = 0
  double beta = 0.3;            ///< Robin coefficient of psi at z = 0
  int s = 2;                    ///< Sobolev exponent

  void validate() const;
};

struct Discretization {
  int k_max = 8;         ///< sine modes per lateral direction
  int n_z = 256;         ///< z grid points, including both ends
  double l_z = 24.0;     ///< truncation length of the half line
  int n_t = 33;          ///< stored time slices on [0, T]
  int quad_nodes = 2;    ///< Duhamel nodes per slice interval (trapezoid)

  void validate() const;
};

struct Mode {
  int k1;
  int k2;
};

/// Lateral sine basis sin(k1 pi x1/a) sin(k2 pi x2/a), k in {1..k_max}^2,
/// times a uniform z grid z_j = j dz on [0, l_z]. Grid point 0 is Gamma.
class Grid {
 public:
  Grid(double a, int k_max, int n_z, double l_z, int max_order = 3);

  /// Builds the grid and checks the far-field truncation: e^{-gamma l_z}
  /// (for gamma > 0) and e^{-mu_min l_z} must both be below tail_tol.
  static Grid make(const ModelParams& params, const Discretization& disc,
                   double tail_tol = 1e-10, int max_order = 3);

  double a() const noexcept { return a_; }
  int k_max() const noexcept { return k_max_; }
  int n_z() const noexcept { return n_z_; }
  double l_z() const noexcept { return l_z_; }
  double dz() const noexcept { return dz_; }
  int max_order() const noexcept { return max_order_; }
  std::size_t mode_count() const noexcept {
    return static_cast<std::size_t>(k_max_) * static_cast<std::size_t>(k_max_);
  }

  double z(int j) const noexcept { return j * dz_; }
  Mode mode(std::size_t m) const noexcept {
    return {static_cast<int>(m) / k_max_ + 1, static_cast<int>(m) % k_max_ + 1};
  }
  std::size_t mode_index(int k1, int k2) const noexcept {
    return static_cast<std::size_t>(k1 - 1) * static_cast<std::size_t>(k_max_) +
           static_cast<std::size_t>(k2 - 1);
  }
  double wavenumber(int k) const noexcept { return k * std::numbers::pi / a_; }
  /// mu_k^2 = (pi |k| / a)^2.
  double mu2(int k1, int k2) const noexcept {
    return wavenumber(k1) * wavenumber(k1) + wavenumber(k2) * wavenumber(k2);
  }
  double mu2(std::size_t m) const noexcept {
    const Mode k = mode(m);
    return mu2(k.k1, k.k2);
  }

  /// Same grid with a different lateral resolution.
  Grid with_k_max(int k_max) const { return Grid(a_, k_max, n_z_, l_z_, max_order_); }
  Grid with_n_z(int n_z) const { return Grid(a_, k_max_, n_z, l_z_, max_order_); }

  bool operator==(const Grid& other) const noexcept = default;

 private:
  double a_;
  int k_max_;
  int n_z_;
  double l_z_;
  double dz_;
  int max_order_;
};

}  // namespace pvm

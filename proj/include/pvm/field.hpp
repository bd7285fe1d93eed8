#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pvm/grid.hpp"

namespace pvm {

/// A field on the slab: for every lateral sine mode (k1, k2) the profile of
/// its coefficient on the z grid. Lateral Dirichlet conditions hold by
/// construction of the basis.
class SpectralField3 {
 public:
  explicit SpectralField3(Grid grid);
  SpectralField3(Grid grid, std::vector<double> coeffs);

  const Grid& grid() const noexcept { return grid_; }

  std::span<double> profile(std::size_t m) noexcept {
    return {coeffs_.data() + m * stride(), stride()};
  }
  std::span<const double> profile(std::size_t m) const noexcept {
    return {coeffs_.data() + m * stride(), stride()};
  }
  std::span<double> profile(int k1, int k2) noexcept { return profile(grid_.mode_index(k1, k2)); }
  std::span<const double> profile(int k1, int k2) const noexcept {
    return profile(grid_.mode_index(k1, k2));
  }

  double& at(int k1, int k2, int j) noexcept { return profile(k1, k2)[static_cast<std::size_t>(j)]; }
  double at(int k1, int k2, int j) const noexcept {
    return profile(k1, k2)[static_cast<std::size_t>(j)];
  }

  std::span<const double> data() const noexcept { return coeffs_; }
  std::span<double> data() noexcept { return coeffs_; }

  bool is_finite() const noexcept;

  SpectralField3& operator+=(const SpectralField3& other);
  SpectralField3& operator-=(const SpectralField3& other);
  SpectralField3& operator*=(double alpha) noexcept;
  /// this += alpha * x
  void axpy(double alpha, const SpectralField3& x);

  friend SpectralField3 operator+(SpectralField3 lhs, const SpectralField3& rhs) { return lhs += rhs; }
  friend SpectralField3 operator-(SpectralField3 lhs, const SpectralField3& rhs) { return lhs -= rhs; }
  friend SpectralField3 operator*(double alpha, SpectralField3 f) { return f *= alpha; }
  friend SpectralField3 operator*(SpectralField3 f, double alpha) { return f *= alpha; }

  bool operator==(const SpectralField3& other) const = default;

 private:
  std::size_t stride() const noexcept { return static_cast<std::size_t>(grid_.n_z()); }

  Grid grid_;
  std::vector<double> coeffs_;
};

/// A field on the cross-section (0,a)^2 as lateral sine coefficients.
class Field2 {
 public:
  explicit Field2(Grid grid);

  const Grid& grid() const noexcept { return grid_; }
  double& at(int k1, int k2) noexcept { return coeffs_[grid_.mode_index(k1, k2)]; }
  double at(int k1, int k2) const noexcept { return coeffs_[grid_.mode_index(k1, k2)]; }
  double& operator[](std::size_t m) noexcept { return coeffs_[m]; }
  double operator[](std::size_t m) const noexcept { return coeffs_[m]; }
  std::span<const double> data() const noexcept { return coeffs_; }

  bool operator==(const Field2& other) const = default;

 private:
  Grid grid_;
  std::vector<double> coeffs_;
};

/// Throws DomainError unless both fields live on the same grid.
void require_same_grid(const Grid& lhs, const Grid& rhs, const char* where);

}  // namespace pvm

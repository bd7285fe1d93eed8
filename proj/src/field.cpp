#include "pvm/field.hpp"

#include <cmath>
#include <string>

#include "pvm/errors.hpp"

namespace pvm {

void require_same_grid(const Grid& lhs, const Grid& rhs, const char* where) {
  if (!(lhs == rhs)) throw DomainError(std::string(where) + ": mismatched discretizations");
}

SpectralField3::SpectralField3(Grid grid)
    : grid_(grid), coeffs_(grid.mode_count() * static_cast<std::size_t>(grid.n_z()), 0.0) {}

SpectralField3::SpectralField3(Grid grid, std::vector<double> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid.mode_count() * static_cast<std::size_t>(grid.n_z()))
    throw DomainError("SpectralField3: coefficient count does not match the grid");
}

bool SpectralField3::is_finite() const noexcept {
  for (double c : coeffs_)
    if (!std::isfinite(c)) return false;
  return true;
}

SpectralField3& SpectralField3::operator+=(const SpectralField3& other) {
  require_same_grid(grid_, other.grid_, "SpectralField3::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField3& SpectralField3::operator-=(const SpectralField3& other) {
  require_same_grid(grid_, other.grid_, "SpectralField3::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField3& SpectralField3::operator*=(double alpha) noexcept {
  for (double& c : coeffs_) c *= alpha;
  return *this;
}

void SpectralField3::axpy(double alpha, const SpectralField3& x) {
  require_same_grid(grid_, x.grid_, "SpectralField3::axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += alpha * x.coeffs_[i];
}

Field2::Field2(Grid grid) : grid_(grid), coeffs_(grid.mode_count(), 0.0) {}

}  // namespace pvm

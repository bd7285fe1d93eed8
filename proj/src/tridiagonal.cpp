#include "pvm/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pvm/errors.hpp"

namespace pvm {

double solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                         std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n)
    throw DomainError("solve_tridiagonal: size mismatch");

  std::vector<double> pivot(n);
  double row_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i > 0 ? std::abs(lower[i]) : 0.0;
    const double up = i + 1 < n ? std::abs(upper[i]) : 0.0;
    row_norm = std::max(row_norm, lo + std::abs(diag[i]) + up);
  }

  pivot[n - 1] = diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    if (pivot[i + 1] == 0.0) return std::numeric_limits<double>::infinity();
    const double factor = upper[i] / pivot[i + 1];
    pivot[i] = diag[i] - factor * lower[i + 1];
    rhs[i] -= factor * rhs[i + 1];
  }
  double min_pivot = std::numeric_limits<double>::infinity();
  for (double p : pivot) min_pivot = std::min(min_pivot, std::abs(p));
  if (min_pivot == 0.0) return std::numeric_limits<double>::infinity();

  rhs[0] /= pivot[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot[i];
  return row_norm / min_pivot;
}

}  // namespace pvm

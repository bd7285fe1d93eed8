#pragma once

#include <memory>
#include <span>
#include <vector>

namespace pvm {

/// Discrete sine transform (type I) on n interior nodes of a uniform grid
/// with n + 1 intervals. analyze() returns b_m such that
///   values[i-1] = sum_{m=1..n} b_m sin(pi m i / (n+1)),   i = 1..n,
/// and synthesize() evaluates that sum. Backed by an FFTW r2r plan made with
/// FFTW_ESTIMATE so results are bitwise reproducible.
class SineTransform {
 public:
  explicit SineTransform(int n);
  ~SineTransform();
  SineTransform(SineTransform&&) noexcept;
  SineTransform& operator=(SineTransform&&) noexcept;
  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  int size() const noexcept { return n_; }
  void analyze(std::span<const double> values, std::span<double> coeffs) const;
  void synthesize(std::span<const double> coeffs, std::span<double> values) const;

 private:
  struct Plan;
  int n_;
  std::unique_ptr<Plan> plan_;
};

/// Lateral collocation on the N x N interior nodes x_p = p a / (N+1). Maps
/// k_max x k_max sine coefficients (row-major in (k1, k2)) to nodal values and
/// back. For N >= k_max the round trip is exact.
class LateralCollocation {
 public:
  LateralCollocation(int k_max, int nodes);

  int k_max() const noexcept { return k_max_; }
  int nodes() const noexcept { return nodes_; }

  void evaluate(std::span<const double> coeffs, std::span<double> values) const;
  void project(std::span<const double> values, std::span<double> coeffs) const;

 private:
  int k_max_;
  int nodes_;
  std::vector<double> sines_;  // sines_[p * k_max + (k-1)] = sin(k pi (p+1) / (N+1))
};

/// Node count used for quadratic products: 3/2 padding of the mode count.
int padded_nodes(int k_max) noexcept;

}  // namespace pvm

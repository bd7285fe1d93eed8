#include "pvm/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "pvm/errors.hpp"

namespace pvm {

struct SineTransform::Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

SineTransform::SineTransform(int n) : n_(n), plan_(std::make_unique<Plan>()) {
  if (n < 1) throw DomainError("SineTransform: size must be >= 1");
  double* in = fftw_alloc_real(static_cast<std::size_t>(n));
  double* out = fftw_alloc_real(static_cast<std::size_t>(n));
  plan_->plan = fftw_plan_r2r_1d(n, in, out, FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (!plan_->plan) throw Error("SineTransform: FFTW planning failed");
}

SineTransform::~SineTransform() = default;
SineTransform::SineTransform(SineTransform&&) noexcept = default;
SineTransform& SineTransform::operator=(SineTransform&&) noexcept = default;

void SineTransform::analyze(std::span<const double> values, std::span<double> coeffs) const {
  if (values.size() != static_cast<std::size_t>(n_) || coeffs.size() != values.size())
    throw DomainError("SineTransform::analyze: size mismatch");
  // FFTW never writes the input of an out-of-place r2r transform.
  fftw_execute_r2r(plan_->plan, const_cast<double*>(values.data()), coeffs.data());
  const double scale = 1.0 / (n_ + 1);
  for (double& b : coeffs) b *= scale;
}

void SineTransform::synthesize(std::span<const double> coeffs, std::span<double> values) const {
  if (coeffs.size() != static_cast<std::size_t>(n_) || values.size() != coeffs.size())
    throw DomainError("SineTransform::synthesize: size mismatch");
  fftw_execute_r2r(plan_->plan, const_cast<double*>(coeffs.data()), values.data());
  for (double& v : values) v *= 0.5;
}

LateralCollocation::LateralCollocation(int k_max, int nodes)
    : k_max_(k_max), nodes_(nodes),
      sines_(static_cast<std::size_t>(k_max) * static_cast<std::size_t>(nodes)) {
  if (k_max < 1 || nodes < k_max) throw DomainError("LateralCollocation: need nodes >= k_max >= 1");
  for (int p = 0; p < nodes; ++p)
    for (int k = 1; k <= k_max; ++k)
      sines_[static_cast<std::size_t>(p * k_max + k - 1)] =
          std::sin(k * std::numbers::pi * (p + 1) / (nodes + 1));
}

void LateralCollocation::evaluate(std::span<const double> coeffs, std::span<double> values) const {
  const auto K = static_cast<std::size_t>(k_max_);
  const auto N = static_cast<std::size_t>(nodes_);
  if (coeffs.size() != K * K || values.size() != N * N)
    throw DomainError("LateralCollocation::evaluate: size mismatch");
  // tmp[k1][q] = sum_k2 c[k1][k2] S[q][k2]
  std::vector<double> tmp(K * N, 0.0);
  for (std::size_t k1 = 0; k1 < K; ++k1)
    for (std::size_t q = 0; q < N; ++q) {
      double acc = 0.0;
      for (std::size_t k2 = 0; k2 < K; ++k2) acc += coeffs[k1 * K + k2] * sines_[q * K + k2];
      tmp[k1 * N + q] = acc;
    }
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = 0; q < N; ++q) {
      double acc = 0.0;
      for (std::size_t k1 = 0; k1 < K; ++k1) acc += sines_[p * K + k1] * tmp[k1 * N + q];
      values[p * N + q] = acc;
    }
}

void LateralCollocation::project(std::span<const double> values, std::span<double> coeffs) const {
  const auto K = static_cast<std::size_t>(k_max_);
  const auto N = static_cast<std::size_t>(nodes_);
  if (coeffs.size() != K * K || values.size() != N * N)
    throw DomainError("LateralCollocation::project: size mismatch");
  std::vector<double> tmp(N * K, 0.0);
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t k2 = 0; k2 < K; ++k2) {
      double acc = 0.0;
      for (std::size_t q = 0; q < N; ++q) acc += values[p * N + q] * sines_[q * K + k2];
      tmp[p * K + k2] = acc;
    }
  const double norm = 2.0 / (nodes_ + 1);
  for (std::size_t k1 = 0; k1 < K; ++k1)
    for (std::size_t k2 = 0; k2 < K; ++k2) {
      double acc = 0.0;
      for (std::size_t p = 0; p < N; ++p) acc += sines_[p * K + k1] * tmp[p * K + k2];
      coeffs[k1 * K + k2] = norm * norm * acc;
    }
}

int padded_nodes(int k_max) noexcept { return (3 * k_max + 1) / 2; }

}  // namespace pvm

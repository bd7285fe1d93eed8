#include "pvm/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pvm/errors.hpp"

namespace pvm {

double ZProfile::operator()(double z) const {
  switch (kind) {
    case Kind::exponential:
      return std::exp(-lambda * z);
    case Kind::robin_exponential:
      return std::exp(-lambda * z) * (1.0 + (lambda - gamma) * z);
    case Kind::power_exponential:
      return std::pow(z, power) * std::exp(-lambda * z);
    case Kind::sine:
      return std::sin(std::numbers::pi * z / length);
  }
  return 0.0;
}

FieldRecipe FieldRecipe::scaled(double factor) const {
  FieldRecipe out = *this;
  for (ModeTerm& t : out.terms_) t.amplitude *= factor;
  return out;
}

SpectralField3 FieldRecipe::sample(const Grid& grid) const {
  SpectralField3 f(grid);
  for (const ModeTerm& t : terms_) {
    if (t.k1 < 1 || t.k2 < 1) throw DomainError("FieldRecipe: lateral modes start at 1");
    if (t.k1 > grid.k_max() || t.k2 > grid.k_max()) continue;
    auto prof = f.profile(t.k1, t.k2);
    for (int j = 0; j < grid.n_z(); ++j)
      prof[static_cast<std::size_t>(j)] += t.amplitude * t.profile(grid.z(j));
  }
  return f;
}

FieldRecipe separable(int k1, int k2, double amplitude, ZProfile profile) {
  return FieldRecipe({ModeTerm{k1, k2, amplitude, profile}});
}

FieldRecipe random_smooth(Rng& rng, const RandomFieldOptions& options) {
  FieldRecipe recipe;
  for (int k1 = 1; k1 <= options.max_mode; ++k1)
    for (int k2 = 1; k2 <= options.max_mode; ++k2) {
      const double amp = rng.uniform(-1.0, 1.0) / std::pow(k1 * k2, options.lateral_decay);
      const double lambda = rng.uniform(options.lambda_min, options.lambda_max);
      const ZProfile prof = options.robin_gamma
                                ? ZProfile::robin_exponential(lambda, *options.robin_gamma)
                                : ZProfile::exponential(lambda);
      recipe.add({k1, k2, amp, prof});
    }
  return recipe;
}

std::vector<FieldRecipe> random_ensemble(std::uint64_t seed, int count,
                                         const RandomFieldOptions& options) {
  Rng rng(seed);
  std::vector<FieldRecipe> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) out.push_back(random_smooth(rng, options));
  return out;
}

std::vector<SpectralField3> sample_all(const std::vector<FieldRecipe>& recipes, const Grid& grid) {
  std::vector<SpectralField3> out;
  out.reserve(recipes.size());
  for (const FieldRecipe& r : recipes) out.push_back(r.sample(grid));
  return out;
}

}  // namespace pvm

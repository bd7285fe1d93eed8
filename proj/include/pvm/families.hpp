#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pvm/field.hpp"

namespace pvm {

/// Analytic z profiles used for initial data, manufactured solutions and
/// random ensembles.
struct ZProfile {
  enum class Kind {
    exponential,        ///< e^{-lambda z}
    robin_exponential,  ///< e^{-lambda z} (1 + (lambda - gamma) z); satisfies p' + gamma p = 0 at 0
    power_exponential,  ///< z^power e^{-lambda z}
    sine,               ///< sin(pi z / length)
  };
  Kind kind = Kind::exponential;
  double lambda = 1.0;
  double gamma = 0.0;
  int power = 0;
  double length = 1.0;

  double operator()(double z) const;

  static ZProfile exponential(double lambda) { return {Kind::exponential, lambda, 0.0, 0, 1.0}; }
  static ZProfile robin_exponential(double lambda, double gamma) {
    return {Kind::robin_exponential, lambda, gamma, 0, 1.0};
  }
  static ZProfile power_exponential(int power, double lambda) {
    return {Kind::power_exponential, lambda, 0.0, power, 1.0};
  }
  static ZProfile sine(double length) { return {Kind::sine, 0.0, 0.0, 0, length}; }
};

struct ModeTerm {
  int k1;
  int k2;
  double amplitude;
  ZProfile profile;
};

/// Grid-independent description of a field: a finite sum of separable
/// terms. Sampling drops terms whose lateral mode exceeds the grid's k_max,
/// which makes refinement studies use the same underlying function.
class FieldRecipe {
 public:
  FieldRecipe() = default;
  explicit FieldRecipe(std::vector<ModeTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<ModeTerm>& terms() const noexcept { return terms_; }
  FieldRecipe& add(ModeTerm term) {
    terms_.push_back(term);
    return *this;
  }
  FieldRecipe scaled(double factor) const;

  SpectralField3 sample(const Grid& grid) const;

 private:
  std::vector<ModeTerm> terms_;
};

/// amplitude * sin(k1 x1) sin(k2 x2) * profile(z) in the scaled lateral basis.
FieldRecipe separable(int k1, int k2, double amplitude, ZProfile profile);

/// 64-bit Mersenne twister with a portable mapping to doubles, so ensembles
/// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

struct RandomFieldOptions {
  int max_mode = 4;                     ///< lateral modes 1..max_mode per direction
  double lateral_decay = 2.0;           ///< amplitude ~ (k1 k2)^{-lateral_decay}
  double lambda_min = 1.0;
  double lambda_max = 3.0;
  std::optional<double> robin_gamma;    ///< if set, every term satisfies the Robin condition
};

FieldRecipe random_smooth(Rng& rng, const RandomFieldOptions& options = {});

/// Reproducible ensemble of `count` recipes drawn from one seed.
std::vector<FieldRecipe> random_ensemble(std::uint64_t seed, int count,
                                         const RandomFieldOptions& options = {});

std::vector<SpectralField3> sample_all(const std::vector<FieldRecipe>& recipes, const Grid& grid);

}  // namespace pvm

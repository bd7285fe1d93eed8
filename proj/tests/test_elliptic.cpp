#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pvm/domain.hpp"
#include "pvm/elliptic.hpp"
#include "pvm/errors.hpp"
#include "pvm/families.hpp"

using namespace pvm;

namespace {

constexpr double pi = std::numbers::pi;

// Dense Gaussian elimination with partial pivoting on the same two-point
// problem, assembled independently of the production path.
std::vector<double> dense_bvp(std::vector<double> f, double mu2, double beta, double h) {
  const std::size_t n = f.size() - 1;  // unknowns 0..n-1, v_n = 0
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  const double c = 1.0 / (h * h);
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] = 2.0 * c + mu2;
    if (i > 0) A[i][i - 1] = -c;
    if (i + 1 < n) A[i][i + 1] = -c;
  }
  // ghost value v_{-1} = v_1 + 2 h beta v_0
  A[0][0] = 2.0 * c - 2.0 * beta / h + mu2;
  A[0][1] = -2.0 * c;
  std::vector<double> b(f.begin(), f.begin() + static_cast<long>(n));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = A[i][k] / A[k][k];
      if (m == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) A[i][j] -= m * A[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= A[k][j] * x[j];
    x[k] = acc / A[k][k];
  }
  return x;
}

}  // namespace

TEST_CASE("admissibility examples") {
  const Grid g(pi, 8, 64, 10.0);
  const AdmissibilityReport r1 = check_admissible(std::sqrt(2.0), g);
  REQUIRE(r1.offending_modes.size() == 1);
  CHECK(r1.offending_modes[0].k1 == 1);
  CHECK(r1.offending_modes[0].k2 == 1);
  CHECK_FALSE(r1.admissible());

  const AdmissibilityReport r2 = check_admissible(-1.0, g);
  CHECK(r2.admissible());
  CHECK(r2.min_gap == doctest::Approx(std::sqrt(2.0) + 1.0));

  const AdmissibilityReport r3 = check_admissible(1.0, g);
  CHECK(r3.admissible());
  CHECK(r3.min_gap == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(r3.min_gap >= r3.tolerance);

  // (1,2) and (2,1) share mu = sqrt 5
  const AdmissibilityReport r4 = check_admissible(std::sqrt(5.0), g);
  CHECK(r4.offending_modes.size() == 2);
}

TEST_CASE("resonant beta raises ResonanceError naming the mode") {
  const Grid g(pi, 4, 128, 20.0);
  try {
    EllipticSolver solver(g, std::sqrt(2.0));
    FAIL("expected ResonanceError");
  } catch (const ResonanceError& e) {
    REQUIRE(e.modes().size() == 1);
    CHECK(e.modes()[0] == std::pair<int, int>(1, 1));
    CHECK(std::string(e.what()).find("(1,1)") != std::string::npos);
  }
  const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(1.0)).sample(g);
  const SpectralField3 v = EllipticSolver(g, std::sqrt(2.0) + 1e-3).solve(f);
  CHECK(v.is_finite());
  CHECK(l2_norm(v) > l2_norm(f));
}

TEST_CASE("growth of the solution as beta approaches resonance") {
  const Grid g(pi, 1, 256, 20.0);
  const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(1.0)).sample(g);
  double prev = 0.0;
  for (double gap : {1e-1, 1e-2, 1e-3}) {
    // the discrete resonance sits slightly above sqrt 2; approach from below
    const double n = l2_norm(EllipticSolver(g, std::sqrt(2.0) - gap).solve(f));
    CHECK(n > prev);
    prev = n;
  }
}

TEST_CASE("manufactured eigenfunction: K f = f for beta = 1") {
  const Grid g(pi, 2, 512, 20.0);
  const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(1.0)).sample(g);
  const SpectralField3 v = solve_elliptic(f, 1.0);
  CHECK(l2_norm(v - f) / l2_norm(f) < 1e-3);
  CHECK(robin_residual(v, 1.0) < 5e-3);
}

TEST_CASE("zero forcing gives the zero solution") {
  const Grid g(pi, 3, 64, 10.0);
  const SpectralField3 v = solve_elliptic(SpectralField3(g), 0.3);
  for (double c : v.data()) CHECK(c == 0.0);
}

TEST_CASE("solver agrees with a dense oracle at 8x resolution") {
  const double beta = 0.3;
  const double l_z = 12.0;
  const Grid coarse(pi, 2, 33, l_z);
  const Grid fine(pi, 2, 257, l_z);
  RandomFieldOptions opts;
  opts.max_mode = 2;
  opts.lambda_max = 2.0;
  for (const auto& recipe : random_ensemble(17, 3, opts)) {
    const SpectralField3 fc = recipe.sample(fine);
    const SpectralField3 vc = solve_elliptic(fc, beta);
    for (std::size_t m = 0; m < fine.mode_count(); ++m) {
      const auto p = fc.profile(m);
      const std::vector<double> ref = dense_bvp({p.begin(), p.end()}, fine.mu2(m), beta, fine.dz());
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        num += (vc.profile(m)[j] - ref[j]) * (vc.profile(m)[j] - ref[j]);
        den += ref[j] * ref[j];
      }
      if (den > 0) CHECK(std::sqrt(num / den) < 1e-10);
    }
    // coarse solves approach the fine reference at second order
    auto distance = [&](const Grid& g, std::size_t stride) {
      const SpectralField3 v = solve_elliptic(recipe.sample(g), beta);
      double num = 0.0, den = 0.0;
      for (std::size_t m = 0; m < g.mode_count(); ++m)
        for (std::size_t j = 0; j < static_cast<std::size_t>(g.n_z()); ++j) {
          const double r = vc.profile(m)[stride * j];
          num += (v.profile(m)[j] - r) * (v.profile(m)[j] - r);
          den += r * r;
        }
      return std::sqrt(num / den);
    };
    const double e33 = distance(coarse, 8);
    const double e65 = distance(coarse.with_n_z(65), 4);
    CHECK(e33 < 0.1);
    CHECK(e33 / e65 > 3.0);
  }
}

TEST_CASE("linearity and discrete residual") {
  const Grid g(pi, 4, 128, 24.0);
  const auto fs = sample_all(random_ensemble(5, 2), g);
  const EllipticSolver K(g, 0.3);
  const SpectralField3 lhs = K.solve(2.5 * fs[0] + fs[1]);
  const SpectralField3 rhs = 2.5 * K.solve(fs[0]) + K.solve(fs[1]);
  CHECK(l2_norm(lhs - rhs) / l2_norm(rhs) < 1e-13);
  CHECK(elliptic_residual(K.solve(fs[0]), fs[0], 0.3) < 1e-10);
}

TEST_CASE("boundary residual is second order") {
  std::vector<double> r;
  for (int n : {128, 256, 512}) {
    const Grid g(pi, 1, n, 20.0);
    const SpectralField3 f = separable(1, 1, 1.0, ZProfile::power_exponential(1, 1.5)).sample(g);
    r.push_back(robin_residual(solve_elliptic(f, 0.3), 0.3));
  }
  CHECK(std::log2(r[0] / r[1]) > 1.8);
  CHECK(std::log2(r[1] / r[2]) > 1.8);
}

TEST_CASE("calibrate_Cs examples") {
  const Grid g(pi, 2, 512, 20.0);
  const SpectralField3 f = separable(1, 1, 1.0, ZProfile::exponential(1.0)).sample(g);
  const SpectralField3 one[1] = {f};
  CHECK(calibrate_Cs(one, 2, 1.0) == doctest::Approx(std::sqrt(10.0)).epsilon(2e-3));
  CHECK_THROWS_AS(calibrate_Cs(std::span<const SpectralField3>{}, 2, 1.0), DomainError);
  const Grid g2(pi, 4, 128, 24.0);
  CHECK_THROWS_AS(calibrate_Cs(g2, 0.3, 0, 2, 1), DomainError);
  const double a = calibrate_Cs(g2, 0.3, 20, 2, 99);
  const double b = calibrate_Cs(g2, 0.3, 20, 2, 99);
  CHECK(a > 0);
  CHECK(a == b);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pvm/domain.hpp"
#include "pvm/errors.hpp"
#include "pvm/families.hpp"
#include "pvm/transforms.hpp"

using namespace pvm;

namespace {

constexpr double pi = std::numbers::pi;

Grid fine_grid(int n_z = 1024, int k_max = 4) { return Grid(pi, k_max, n_z, 30.0); }

SpectralField3 sinsin_exp(const Grid& g, double lambda = 1.0) {
  return separable(1, 1, 1.0, ZProfile::exponential(lambda)).sample(g);
}

}  // namespace

TEST_CASE("grid validates its inputs") {
  CHECK_THROWS_AS(Grid(0.0, 4, 64, 10.0), DomainError);
  CHECK_THROWS_AS(Grid(pi, 0, 64, 10.0), DomainError);
  CHECK_THROWS_AS(Grid(pi, 4, 7, 10.0), DomainError);
  CHECK_THROWS_AS(Grid(pi, 4, 64, -1.0), DomainError);
  const Grid g(pi, 4, 65, 8.0);
  CHECK(g.dz() == doctest::Approx(0.125));
  CHECK(g.z(0) == 0.0);
  CHECK(g.z(64) == doctest::Approx(8.0));
  CHECK(g.mode_index(2, 3) == 6);
  CHECK(g.mode(6).k1 == 2);
  CHECK(g.mode(6).k2 == 3);
  CHECK(g.mu2(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("grid truncation check against the tail tolerance") {
  ModelParams p;
  Discretization d;
  d.l_z = 10.0;
  CHECK_THROWS_AS(Grid::make(p, d), ConfigError);
  d.l_z = 24.0;
  CHECK_NOTHROW(Grid::make(p, d));
  d.quad_nodes = 3;
  CHECK_THROWS_AS(Grid::make(p, d), ConfigError);
}

TEST_CASE("L2 and H2 norms of the separable exponential mode") {
  const Grid g = fine_grid(2048);
  const SpectralField3 f = sinsin_exp(g);
  CHECK(sobolev_norm(SpectralField3(g), 2) == 0.0);
  CHECK(l2_norm(f) == doctest::Approx(std::sqrt(pi * pi / 8.0)).epsilon(1e-4));
  // every one of the ten multi-indices with |alpha| <= 2 contributes pi^2/8
  CHECK(sobolev_norm(f, 2) == doctest::Approx(std::sqrt(10.0 * pi * pi / 8.0)).epsilon(1e-3));
}

TEST_CASE("Parseval consistency for a single mode") {
  const Grid g = fine_grid(256);
  const SpectralField3 f = separable(2, 3, 0.7, ZProfile::power_exponential(2, 1.5)).sample(g);
  std::vector<double> sq;
  for (double c : f.profile(2, 3)) sq.push_back(c * c);
  CHECK(l2_norm(f) == doctest::Approx(0.5 * g.a() * std::sqrt(trapezoid(sq, g.dz()))).epsilon(1e-14));
}

TEST_CASE("sobolev norm rejects orders above the configured maximum") {
  const Grid g(pi, 2, 64, 10.0, 3);
  CHECK_THROWS_AS(sobolev_norm(SpectralField3(g), 4), DomainError);
  CHECK_THROWS_AS(sobolev_norm(SpectralField3(g), -1), DomainError);
}

TEST_CASE("sobolev norm is monotone in s") {
  const Grid g = fine_grid(256);
  for (const auto& r : random_ensemble(3, 10)) {
    const SpectralField3 f = r.sample(g);
    CHECK(sobolev_norm(f, 0) <= sobolev_norm(f, 1));
    CHECK(sobolev_norm(f, 1) <= sobolev_norm(f, 2));
    CHECK(sobolev_norm(f, 2) <= sobolev_norm(f, 3));
  }
}

TEST_CASE("d_z examples") {
  const Grid g = fine_grid(1024);
  const SpectralField3 f = sinsin_exp(g);
  const SpectralField3 df = d_z(f, 1);
  CHECK(l2_norm(df + f) / l2_norm(f) < 1e-3);

  SpectralField3 c(g);
  for (auto& x : c.profile(1, 1)) x = 3.0;
  const SpectralField3 dc = d_z(c, 1);
  for (int j = 1; j + 1 < g.n_z(); ++j) CHECK(dc.at(1, 1, j) == 0.0);

  const SpectralField3 s = separable(1, 1, 1.0, ZProfile::sine(g.l_z())).sample(g);
  const double k = pi / g.l_z();
  CHECK(l2_norm(d_z(s, 2) + k * k * s) / (k * k * l2_norm(s)) < 1e-4);
  CHECK_THROWS_AS(d_z(f, 3), DomainError);
}

TEST_CASE("d_z converges at second order") {
  std::vector<double> err;
  for (int n : {128, 256, 512, 1024}) {
    const Grid g(pi, 1, n, 20.0);
    const SpectralField3 f = separable(1, 1, 1.0, ZProfile::power_exponential(1, 1.0)).sample(g);
    // d/dz (z e^{-z}) = (1 - z) e^{-z}
    SpectralField3 exact(g);
    for (int j = 0; j < n; ++j) exact.at(1, 1, j) = (1.0 - g.z(j)) * std::exp(-g.z(j));
    err.push_back(l2_norm(d_z(f, 1) - exact));
  }
  for (std::size_t i = 0; i + 1 < err.size(); ++i) CHECK(std::log2(err[i] / err[i + 1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("sine transform round trip and normalisation") {
  const SineTransform t(7);
  std::vector<double> coeffs = {1.0, 0.0, -0.5, 0.0, 0.0, 0.25, 0.0};
  std::vector<double> values(7), back(7);
  t.synthesize(coeffs, values);
  for (int i = 1; i <= 7; ++i) {
    double expect = 0.0;
    for (int m = 1; m <= 7; ++m) expect += coeffs[m - 1] * std::sin(pi * m * i / 8.0);
    CHECK(values[i - 1] == doctest::Approx(expect).epsilon(1e-13));
  }
  t.analyze(values, back);
  for (int m = 0; m < 7; ++m) CHECK(back[m] == doctest::Approx(coeffs[m]).epsilon(1e-13));
}

TEST_CASE("lateral collocation is exact for resolved modes") {
  const LateralCollocation c(4, 6);
  std::vector<double> coeffs(16), values(36), back(16);
  for (int i = 0; i < 16; ++i) coeffs[i] = 0.1 * (i + 1);
  c.evaluate(coeffs, values);
  c.project(values, back);
  for (int i = 0; i < 16; ++i) CHECK(back[i] == doctest::Approx(coeffs[i]).epsilon(1e-13));
  CHECK(padded_nodes(8) == 12);
}

TEST_CASE("pointwise product is exact for the product of two single modes") {
  const Grid g(pi, 4, 16, 2.0);
  SpectralField3 u(g), v(g);
  for (int j = 0; j < g.n_z(); ++j) {
    u.at(1, 1, j) = 1.0;
    v.at(1, 1, j) = 2.0;
  }
  // sin^2 x = (1 - cos 2x)/2 has sine coefficients 8/(pi k (4 - k^2)) for odd k
  const SpectralField3 w = pointwise_product(u, v);
  auto sq_coeff = [](int k) { return k % 2 ? 8.0 / (pi * k * (4.0 - k * k)) : 0.0; };
  // the padded product is exact only up to aliasing of the tail; the leading coefficient is sharp
  CHECK(w.at(1, 1, 0) == doctest::Approx(2.0 * sq_coeff(1) * sq_coeff(1)).epsilon(2e-2));
  CHECK(std::abs(w.at(2, 1, 0)) < 1e-12);
}

TEST_CASE("product ratio examples") {
  const Grid g = fine_grid(256);
  const SpectralField3 f = sinsin_exp(g);
  const double r = product_ratio(f, f, 2);
  CHECK(std::isfinite(r));
  CHECK(r > 0);
  const SpectralField3 h = separable(2, 1, 0.3, ZProfile::exponential(2.0)).sample(g);
  CHECK(product_ratio(2.0 * f, 3.0 * h, 2) == doctest::Approx(product_ratio(f, h, 2)).epsilon(1e-13));
  CHECK_THROWS_AS(product_ratio(f, SpectralField3(g), 2), DomainError);
}

TEST_CASE("fields on different grids are rejected") {
  SpectralField3 a(Grid(pi, 2, 16, 2.0));
  const SpectralField3 b(Grid(pi, 2, 32, 2.0));
  CHECK_THROWS_AS(a += b, DomainError);
  CHECK_THROWS_AS(sobolev_norm(a - b, 0), DomainError);
}

TEST_CASE("random ensembles are reproducible from the seed") {
  const Grid g(pi, 4, 64, 10.0);
  const auto a = sample_all(random_ensemble(42, 5), g);
  const auto b = sample_all(random_ensemble(42, 5), g);
  const auto c = sample_all(random_ensemble(43, 5), g);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("Robin-compatible profiles satisfy the Robin condition") {
  const ZProfile p = ZProfile::robin_exponential(2.5, 1.0);
  const double h = 1e-6;
  const double dp = (p(h) - p(0.0)) / h;
  CHECK(dp + 1.0 * p(0.0) == doctest::Approx(0.0).epsilon(1e-5));
}

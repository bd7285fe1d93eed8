#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pvm/domain.hpp"
#include "pvm/errors.hpp"
#include "pvm/families.hpp"
#include "pvm/verify.hpp"

using namespace pvm;

namespace {

constexpr double pi = std::numbers::pi;

ModelParams with_gamma(double gamma) {
  ModelParams p;
  p.gamma = gamma;
  return p;
}

}  // namespace

TEST_CASE("certificate verdicts") {
  const Certificate a = make_certificate("x", 0.5, 1.0);
  CHECK(a.passed);
  CHECK(*a.margin == doctest::Approx(1.0));
  const Certificate b = make_certificate("x", 2.0, 1.0);
  CHECK_FALSE(b.passed);
  const Certificate z = make_certificate("x", 0.0, 0.0);
  CHECK(z.passed);
  CHECK_FALSE(z.margin.has_value());
  const Certificate n = make_certificate("x", std::numeric_limits<double>::quiet_NaN(), 1.0);
  CHECK_FALSE(n.passed);
}

TEST_CASE("observed order of a clean power law") {
  const double h[] = {0.1, 0.05, 0.025};
  const double e[] = {3e-2, 7.5e-3, 1.875e-3};
  CHECK(observed_order(h, e) == doctest::Approx(2.0));
  const double one[] = {1.0};
  CHECK_THROWS_AS(observed_order(std::span<const double>(h, 1), one), DomainError);
}

TEST_CASE("gronwall energy examples") {
  const double t[] = {0.0, 0.1, 0.2, 0.5};
  SUBCASE("decaying mode") {
    std::vector<double> e;
    for (double x : t) e.push_back(std::exp(-14.0 * x));
    const Certificate c = gronwall_energy_check(t, e, with_gamma(1.0));
    CHECK(c.passed);
    CHECK(*c.margin > 1.0);
  }
  SUBCASE("growing gamma = 2 mode") {
    const Grid g(pi, 2, 512, 20.0);
    const ModelParams p = with_gamma(2.0);
    const RobinPropagator P(g, p);
    const HeatRun run = heat_run(separable(1, 1, 1.0, ZProfile::exponential(2.0)).sample(g), t, P);
    const auto e = energies(run.omega);
    CHECK(e[3] == doctest::Approx(e[0] * std::exp(4.0 * 0.5)).epsilon(1e-6));
    CHECK(gronwall_energy_check(t, e, p).passed);
  }
  SUBCASE("zero series") {
    const double e[] = {0.0, 0.0, 0.0, 0.0};
    const Certificate c = gronwall_energy_check(t, e, with_gamma(1.0));
    CHECK(c.passed);
    CHECK(c.measured == 0.0);
  }
  SUBCASE("violation and short series") {
    const double e[] = {1.0, 10.0, 10.0, 10.0};
    CHECK_FALSE(gronwall_energy_check(t, e, with_gamma(1.0)).passed);
    CHECK_THROWS_AS(gronwall_energy_check(std::span<const double>(t, 1), std::span<const double>(e, 1), with_gamma(1.0)),
                    DomainError);
  }
}

TEST_CASE("growth bound check") {
  const Grid g(pi, 2, 512, 20.0);
  const ModelParams p = with_gamma(2.0);
  const SpectralField3 one[1] = {separable(1, 1, 1.0, ZProfile::exponential(2.0)).sample(g)};
  const double t[] = {0.0, 0.5};
  const Certificate c = growth_bound_check(one, t, 1.0, 2, p);
  CHECK(c.measured == doctest::Approx(1.0));
  CHECK(c.bound == doctest::Approx(1.1));
  CHECK(c.passed);
  CHECK_THROWS_AS(growth_bound_check(std::span<const SpectralField3>{}, t, 1.0, 2, p), DomainError);
}

TEST_CASE("contraction check") {
  PicardDiagnostics zero;
  zero.differences = {0.0};
  const Certificate z = contraction_check(zero);
  CHECK(z.passed);
  CHECK(z.measured == 0.0);
  PicardDiagnostics d;
  d.differences = {1.0, 0.1, 0.02};
  d.ratios = {0.1, 0.2};
  CHECK(contraction_check(d).measured == doctest::Approx(0.2));
  d.ratios.push_back(0.6);
  CHECK_FALSE(contraction_check(d).passed);
  PicardDiagnostics short_run;
  short_run.differences = {1.0};
  CHECK_THROWS_AS(contraction_check(short_run), DomainError);
}

TEST_CASE("suite isolates failures and orders by name") {
  CertificateSuite suite;
  suite.add("zeta", [] { return make_certificate("zeta", 1.0, 2.0); });
  suite.add("alpha", []() -> Certificate { throw std::runtime_error("boom"); });
  suite.add("mid", [] { return make_certificate("mid", 3.0, 2.0); });
  const auto certs = suite.run();
  REQUIRE(certs.size() == 3);
  CHECK(certs[0].name == "alpha");
  CHECK_FALSE(certs[0].passed);
  CHECK(certs[0].detail.find("boom") != std::string::npos);
  CHECK(certs[1].name == "mid");
  CHECK_FALSE(certs[1].passed);
  CHECK(certs[2].passed);
  CHECK_FALSE(all_passed(certs));
}

TEST_CASE("uniqueness heat and smoothing checks") {
  const Grid g(pi, 4, 256, 24.0);
  const ModelParams p = with_gamma(1.0);
  RandomFieldOptions o;
  o.robin_gamma = 1.0;
  const auto e = sample_all(random_ensemble(31, 2, o), g);
  CHECK(uniqueness_heat_check(e, 0.5, p, 1000).passed);

  o.max_mode = 8;
  o.lateral_decay = 1.0;
  Rng rng(12);
  const FieldRecipe rough = random_smooth(rng, o);
  const Grid coarse(pi, 4, 256, 24.0);
  const Certificate s = smoothing_check(rough, 0.1, p, coarse);
  CHECK(std::isfinite(s.measured));
}

TEST_CASE("product constant from consecutive pairs") {
  const Grid g(pi, 4, 128, 24.0);
  const auto e = sample_all(random_ensemble(8, 6), g);
  const double c = calibrate_product_constant(e, 2);
  CHECK(c > 0);
  CHECK(product_inequality_check(e, c, 2).passed);
  CHECK_THROWS_AS(calibrate_product_constant(std::span<const SpectralField3>(e.data(), 1), 2), DomainError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "varlex/errors.hpp"
#include "varlex/rng.hpp"
#include "varlex/stable.hpp"

using namespace varlex;

TEST_CASE("log_gamma reference points") {
  CHECK(log_gamma(0.5) ==
        doctest::Approx(0.57236494292470008707).epsilon(1e-14));  // ln sqrt(pi)
  CHECK(std::fabs(log_gamma(1.0)) <= 1e-14);
  CHECK(std::fabs(log_gamma(2.0)) <= 1e-14);
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), domain_error);
}

TEST_CASE("log_gamma matches the library implementation") {
  // std::lgamma is the independent reference here.
  for (double x = 0.05; x < 30.0; x += 0.037) {
    const double mine = log_gamma(x);
    const double ref = std::lgamma(x);
    CHECK(mine == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("moment constants") {
  const Exponent two(2.0);
  CHECK(moment_c(two, 1.0) ==
        doctest::Approx(0.56418958354775628695).epsilon(1e-12));  // 1/sqrt(pi)
  CHECK(moment_c(two, 2.0) ==
        doctest::Approx(0.70710678118654752440).epsilon(1e-12));  // sqrt(1/2)
  // c_{1.5,1} = Gamma(1/3)/pi, evaluated through the independent lgamma.
  const double ref = std::exp(std::lgamma(1.0 / 3.0)) / 3.14159265358979323846;
  CHECK(moment_c(Exponent(1.5), 1.0) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(moment_c(Exponent(1.5), 1.0) == doctest::Approx(0.8527).epsilon(2e-4));

  CHECK_THROWS_AS(moment_c(Exponent(1.5), 2.0), domain_error);
  CHECK_THROWS_AS(moment_c(Exponent(1.5), 1.5), domain_error);
  CHECK_THROWS_AS(moment_c(two, 0.0), domain_error);
  CHECK_THROWS_AS(moment_c(Exponent::infinity(), 1.0), domain_error);
}

TEST_CASE("moment constant continuity across the r=2 branch") {
  const double eps = 1e-6;
  for (double p : {0.3, 0.7, 1.0, 1.5, 1.9}) {
    const double near = moment_c(Exponent(2.0 - eps), p);
    const double at2 = moment_c(Exponent(2.0), p);
    CHECK(near / at2 == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("stable sampler moments and symmetry") {
  SUBCASE("r=2 has variance 2") {
    const auto x = sample_stable(2.0, 1000000, 31337);
    double acc = 0.0;
    for (double v : x) acc += v * v;
    CHECK(acc / double(x.size()) == doctest::Approx(2.0).epsilon(0.02));
  }
  SUBCASE("r=1 has median 0") {
    auto x = sample_stable(1.0, 1000000, 808);
    std::nth_element(x.begin(), x.begin() + x.size() / 2, x.end());
    CHECK(std::fabs(x[x.size() / 2]) <= 0.01);
  }
  SUBCASE("sign symmetry for several indices") {
    for (double r : {0.8, 1.2, 1.7, 2.0}) {
      const auto x = sample_stable(r, 400000, 99);
      double signs = 0.0;
      for (double v : x) signs += (v > 0.0) - (v < 0.0);
      CHECK(std::fabs(signs) / double(x.size()) <= 0.005);
    }
  }
  SUBCASE("deterministic in the seed, sharded prefix-stable") {
    const auto a = sample_stable(1.5, 70000, 7);
    const auto b = sample_stable(1.5, 70000, 7);
    CHECK(a == b);
    const auto c = sample_stable(1.5, 70001, 7);
    for (std::size_t i = 0; i < 70000; ++i) REQUIRE(a[i] == c[i]);
  }
  SUBCASE("index domain") {
    CHECK_THROWS_AS(sample_stable(0.0, 10, 1), domain_error);
    CHECK_THROWS_AS(sample_stable(2.5, 10, 1), domain_error);
    CHECK_THROWS_AS(sample_stable(-1.0, 10, 1), domain_error);
  }
}

TEST_CASE("mc_ratio_check") {
  SUBCASE("identical moments give ratio one") {
    const McRatio r = mc_ratio_check(2.0, 2.0, 2.0, 1000, 5);
    CHECK(r.mc_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.formula_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("gaussian case matches sqrt(pi/2)") {
    const McRatio r = mc_ratio_check(2.0, 1.0, 2.0, 1000000, 12);
    CHECK(r.formula_ratio ==
          doctest::Approx(std::sqrt(3.14159265358979323846 / 2.0)).epsilon(1e-12));
    CHECK(r.mc_ratio == doctest::Approx(r.formula_ratio).epsilon(0.02));
  }
  SUBCASE("heavy-tailed case agrees within 2 percent") {
    const McRatio r = mc_ratio_check(1.5, 1.0, 1.2, 1000000, 12);
    CHECK(r.mc_ratio == doctest::Approx(r.formula_ratio).epsilon(0.02));
  }
}

TEST_CASE("moment ratio is scale invariant") {
  auto x = sample_stable(1.7, 50000, 4);
  const double base = moment_ratio(x, 1.0, 1.3);
  // exact for power-of-two factors (no rounding in the rescale)
  for (double c : {0.0009765625, 0.5, 4.0, 1099511627776.0}) {
    auto y = x;
    for (double& v : y) v *= c;
    CHECK(moment_ratio(y, 1.0, 1.3) == base);
  }
  // one-rounding-tight otherwise
  for (double c : {3.0, 1e-6, 7.77e5}) {
    auto y = x;
    for (double& v : y) v *= c;
    CHECK(moment_ratio(y, 1.0, 1.3) == doctest::Approx(base).epsilon(1e-13));
  }
}

TEST_CASE("shard combination is independent of the thread count") {
  const McRatio serial = mc_ratio_check(1.5, 1.0, 1.2, 300000, 123);
  setenv("VARLEX_THREADS", "4", 1);
  const McRatio parallel = mc_ratio_check(1.5, 1.0, 1.2, 300000, 123);
  unsetenv("VARLEX_THREADS");
  CHECK(serial.mc_ratio == parallel.mc_ratio);
  CHECK(serial.formula_ratio == parallel.formula_ratio);
}

TEST_CASE("mc_integration_lemma") {
  SUBCASE("equal coefficient lists give ratio one") {
    const McLemmaRatios r =
        mc_integration_lemma(1.5, 1.0, {1.0, 2.0}, {1.0, 2.0}, 2000, 3);
    CHECK(r.lhs_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.rhs_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("gaussian combination doubles the scale") {
    const McLemmaRatios r =
        mc_integration_lemma(2.0, 1.0, {1.0, 1.0}, {1.0, 0.0}, 1000000, 21);
    CHECK(r.rhs_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.lhs_ratio == doctest::Approx(r.rhs_ratio).epsilon(0.02));
  }
  SUBCASE("homogeneity is exact") {
    const McLemmaRatios r =
        mc_integration_lemma(1.5, 0.7, {2.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 50000, 9);
    CHECK(r.rhs_ratio == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.lhs_ratio == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(mc_integration_lemma(1.5, 1.5, {1.0}, {1.0}, 10, 1),
                    domain_error);
    CHECK_THROWS_AS(mc_integration_lemma(1.5, 1.7, {1.0}, {1.0}, 10, 1),
                    domain_error);
    CHECK_THROWS_AS(mc_integration_lemma(1.5, 1.0, {0.0}, {1.0}, 10, 1),
                    validation_error);
    CHECK_THROWS_AS(mc_integration_lemma(1.5, 1.0, {}, {1.0}, 10, 1),
                    validation_error);
  }
}

TEST_CASE("stability closure: sums of two coordinates match a rescaled single") {
  for (double r : {1.2, 1.7, 2.0}) {
    const std::size_t n = 200000;
    auto pair_samples = sample_stable(r, 2 * n, 1001);
    std::vector<double> sums(n);
    for (std::size_t i = 0; i < n; ++i)
      sums[i] = pair_samples[2 * i] + pair_samples[2 * i + 1];
    auto single = sample_stable(r, n, 2002);
    const double scale = std::pow(2.0, 1.0 / r);
    for (double& v : single) v *= scale;
    std::sort(sums.begin(), sums.end());
    std::sort(single.begin(), single.end());
    for (double q = 0.1; q < 0.95; q += 0.1) {
      if (std::fabs(q - 0.5) < 1e-9) continue;
      const double a = sums[std::size_t(q * n)];
      const double b = single[std::size_t(q * n)];
      CHECK(std::fabs(a - b) <= 0.02 * std::fabs(a) + 0.01);
    }
  }
}

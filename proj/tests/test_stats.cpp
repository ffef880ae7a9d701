/*
 * Copyright 2026 The saralert authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracle_helpers.hpp"
#include "saralert/stats.hpp"
#include "saralert/synth.hpp"
#include "stats_fixtures.hpp"

using namespace saralert;

TEST_CASE("z_quantile hits the high-precision references") {
  CHECK(z_quantile(0.5) == 0.0);
  CHECK(z_quantile(0.05) ==
        doctest::Approx(-1.64485362695147271).epsilon(1e-9));
  CHECK(z_quantile(0.01) ==
        doctest::Approx(-2.32634787404084110).epsilon(1e-9));
  CHECK(z_quantile(0.001) ==
        doctest::Approx(-3.09023230616781354).epsilon(1e-9));
  CHECK(z_quantile(0.2) ==
        doctest::Approx(-0.84162123357291421).epsilon(1e-9));
  CHECK(z_quantile(0.4) ==
        doctest::Approx(-0.25334710313579980).epsilon(1e-9));
  CHECK_THROWS_AS(z_quantile(0.0), ConfigError);
  CHECK_THROWS_AS(z_quantile(1.0), ConfigError);
  CHECK_THROWS_AS(z_quantile(-0.3), ConfigError);
}

TEST_CASE("z_quantile is symmetric and inverts the CDF") {
  SplitMix64 rng(derive_stream(300, {1}));
  for (int i = 0; i < 2000; ++i) {
    const double alpha = 1e-6 + rng.next_unit() * (1.0 - 2e-6);
    const double z = z_quantile(alpha);
    CHECK(std::fabs(z + z_quantile(1.0 - alpha)) < 1e-10);
    // Independent series evaluation of the CDF (absolute tolerance).
    CHECK(std::fabs(oracle::normal_cdf_series(z) - alpha) < 1e-8);
    CHECK(std::fabs(normal_cdf(z) - alpha) < 1e-10);
  }
}

TEST_CASE("chi-squared survival matches the frozen references") {
  CHECK(chi2_sf(3.5, 2) == doctest::Approx(0.173773943450).epsilon(1e-10));
  CHECK(chi2_sf(10.2, 7) == doctest::Approx(0.177520128280).epsilon(1e-10));
  CHECK(chi2_sf(0.3, 1) == doctest::Approx(0.583882420770).epsilon(1e-10));
  CHECK(chi2_sf(0.0, 3) == 1.0);
}

TEST_CASE("kolmogorov survival matches the frozen references") {
  CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.963945243665).epsilon(1e-10));
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.269999671677).epsilon(1e-10));
  CHECK(kolmogorov_sf(1.5) == doctest::Approx(0.022217962617).epsilon(1e-10));
  CHECK(kolmogorov_sf(0.0) == 1.0);
}

TEST_CASE("shapiro_wilk reproduces the reference implementation") {
  auto check = [](const std::vector<double>& sample, double W, double p) {
    const TestResult r = shapiro_wilk(sample);
    CHECK(r.statistic == doctest::Approx(W).epsilon(1e-5));
    CHECK(r.p_value == doctest::Approx(p).epsilon(2e-4));
  };
  check(fixtures::kX20, 0.9796577505, 0.9296052925);
  check(fixtures::kY48, 0.9653738358, 0.1662298280);
  check(fixtures::kZ30, 0.8684557158, 0.0015480708);
  check(fixtures::kN5, 0.9957439382, 0.9954388838);
}

TEST_CASE("shapiro_wilk degenerate and boundary cases") {
  // Sample exactly linear in the normal order statistics: perfect fit.
  const TestResult perfect = shapiro_wilk(std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(perfect.statistic == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{1.0, 1.0, 1.0}),
                  DataError);
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{1.0, 2.0}), DataError);
  std::vector<double> huge(5001, 0.0);
  CHECK_THROWS_AS(shapiro_wilk(huge), DataError);
}

TEST_CASE("shapiro_wilk is affine invariant") {
  const TestResult base = shapiro_wilk(fixtures::kX20);
  std::vector<double> shifted = fixtures::kX20;
  for (auto& v : shifted) v = 3.7 * v - 11.0;
  const TestResult after = shapiro_wilk(shifted);
  CHECK(after.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
  CHECK(after.p_value == doctest::Approx(base.p_value).epsilon(1e-9));
}

TEST_CASE("ks statistic: trivial constructions") {
  SUBCASE("single point at the fixed-normal median") {
    const TestResult r = ks_normality(std::vector<double>{0.0},
                                      NormalParams{0.0, 1.0});
    CHECK(r.statistic == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("sample at quantiles (i - 0.5)/n gives D = 0.5/n") {
    const int n = 16;
    std::vector<double> sample;
    for (int i = 1; i <= n; ++i)
      sample.push_back(z_quantile((i - 0.5) / n));
    const TestResult r = ks_normality(sample, NormalParams{0.0, 1.0});
    CHECK(r.statistic == doctest::Approx(0.5 / n).epsilon(1e-9));
  }
}

TEST_CASE("ks against the exhaustive-sup oracle and reference D") {
  const TestResult r = ks_normality(fixtures::kXs25, NormalParams{0.0, 1.0});
  CHECK(r.statistic == doctest::Approx(0.18927318317).epsilon(1e-10));
  CHECK(r.p_value == doctest::Approx(0.299792796856).epsilon(1e-9));

  // Brute-force sup over a fine x grid must never exceed the jump-point
  // computation (and must reach it at a jump).
  SplitMix64 rng(derive_stream(301, {2}));
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> sample(40);
    for (auto& v : sample) v = rng.next_normal() * 1.3 + 0.4;
    const TestResult fit = ks_normality(sample);
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    double mu = 0.0;
    for (double v : sorted) mu += v;
    mu /= sorted.size();
    double ss = 0.0;
    for (double v : sorted) ss += (v - mu) * (v - mu);
    const double sd = std::sqrt(ss / (sorted.size() - 1));
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double cdf = normal_cdf((sorted[i] - mu) / sd);
      sup = std::max({sup, (i + 1.0) / sorted.size() - cdf,
                      cdf - static_cast<double>(i) / sorted.size()});
    }
    CHECK(fit.statistic == doctest::Approx(sup).epsilon(1e-12));
  }
}

TEST_CASE("ks affine invariance with estimated parameters") {
  std::vector<double> sample = fixtures::kX20;
  const TestResult base = ks_normality(sample);
  for (auto& v : sample) v = -2.5 * v + 8.0;
  // Negative scale reverses order; D is computed on the sorted sample so
  // the statistic is preserved.
  const TestResult after = ks_normality(sample);
  CHECK(after.statistic == doctest::Approx(base.statistic).epsilon(1e-9));
  CHECK(after.p_value == doctest::Approx(base.p_value).epsilon(1e-9));
}

TEST_CASE("ks degenerate inputs") {
  CHECK_THROWS_AS(ks_normality(std::vector<double>{}), DataError);
  CHECK_THROWS_AS(ks_normality(std::vector<double>{1.0}), DataError);
  CHECK_THROWS_AS(ks_normality(std::vector<double>{2.0, 2.0, 2.0}),
                  DataError);
}

TEST_CASE("bartlett textbook fixture and trivial cases") {
  const TestResult r = bartlett({fixtures::kG1, fixtures::kG2, fixtures::kG3});
  CHECK(r.statistic == doctest::Approx(1.359262450747).epsilon(1e-10));
  CHECK(r.p_value == doctest::Approx(0.506803854311).epsilon(1e-9));

  SUBCASE("equal variances give statistic 0, p = 1") {
    const TestResult eq = bartlett({{0.0, 2.0}, {5.0, 7.0}});
    CHECK(eq.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eq.p_value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("grossly unequal variances reject") {
    SplitMix64 rng(derive_stream(302, {3}));
    std::vector<double> a(400), b(400);
    for (auto& v : a) v = rng.next_normal();
    for (auto& v : b) v = rng.next_normal() * 10.0;
    const TestResult res = bartlett({a, b});
    CHECK(res.p_value < 0.01);
  }
  SUBCASE("degenerate groups throw") {
    CHECK_THROWS_AS(bartlett({{1.0, 2.0}}), DataError);
    CHECK_THROWS_AS(bartlett({{1.0, 2.0}, {3.0}}), DataError);
    CHECK_THROWS_AS(bartlett({{1.0, 2.0}, {4.0, 4.0}}), DataError);
  }
}

TEST_CASE("bartlett is invariant under common rescaling") {
  const TestResult base =
      bartlett({fixtures::kG1, fixtures::kG2, fixtures::kG3});
  auto scale = [](std::vector<double> v) {
    for (auto& x : v) x *= 0.037;
    return v;
  };
  const TestResult scaled = bartlett(
      {scale(fixtures::kG1), scale(fixtures::kG2), scale(fixtures::kG3)});
  CHECK(scaled.statistic == doctest::Approx(base.statistic).epsilon(1e-9));
}

TEST_CASE("monte-carlo calibration under the null at alpha = 1%") {
  // Identical in spirit to the acceptance criterion but smaller so the
  // unit suite stays fast: 2000 trials, n = 48.
  const int trials = 2000;
  const int n = 48;
  int sw_reject = 0, ks_reject = 0, bt_reject = 0;
  SplitMix64 rng(derive_stream(303, {4}));
  for (int t = 0; t < trials; ++t) {
    std::vector<double> sample(n);
    for (auto& v : sample) v = rng.next_normal();
    if (shapiro_wilk(sample).p_value < 0.01) ++sw_reject;
    if (ks_normality(sample).p_value < 0.01) ++ks_reject;
    std::vector<double> b1(n), b2(n);
    for (auto& v : b1) v = rng.next_normal();
    for (auto& v : b2) v = rng.next_normal();
    if (bartlett({b1, b2}).p_value < 0.01) ++bt_reject;
  }
  const double sw_rate = static_cast<double>(sw_reject) / trials;
  const double bt_rate = static_cast<double>(bt_reject) / trials;
  const double ks_rate = static_cast<double>(ks_reject) / trials;
  // 2000 trials: 3 binomial SEs around 1% is roughly [0.3%, 1.7%].
  CHECK(sw_rate > 0.002);
  CHECK(sw_rate < 0.02);
  CHECK(bt_rate > 0.002);
  CHECK(bt_rate < 0.02);
  // Estimated parameters make the asymptotic KS p conservative
  // (Lilliefors); it must not over-reject.
  CHECK(ks_rate <= 0.01);
}

TEST_CASE("shapiro_wilk rejects non-normal data with power") {
  SplitMix64 rng(derive_stream(304, {5}));
  int reject = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> sample(48);
    for (auto& v : sample) v = rng.next_gamma(1.5);  // strongly skewed
    if (shapiro_wilk(sample).p_value < 0.01) ++reject;
  }
  CHECK(reject > trials / 2);
}

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

#ifndef SARALERT_STATS_HPP_
#define SARALERT_STATS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "saralert/types.hpp"

namespace saralert {

double normal_pdf(double x);
/// Standard normal CDF via erfc; accurate over the full double range.
double normal_cdf(double x);

/// Standard normal quantile Phi^-1(alpha). Rational approximation
/// (Wichura's AS 241 coefficient set) refined with one Newton step against
/// the erfc-based CDF; absolute error well under 1e-8. Throws ConfigError
/// for alpha outside (0, 1).
double z_quantile(double alpha);

/// Regularized lower incomplete gamma P(a, x) (series / continued
/// fraction).
double regularized_gamma_p(double a, double x);
/// Chi-squared survival function with dof degrees of freedom.
double chi2_sf(double x, double dof);
/// Kolmogorov distribution survival function Q(lambda).
double kolmogorov_sf(double lambda);

enum class TestKind { kShapiroWilk, kKolmogorovSmirnov, kBartlett };

std::string test_kind_name(TestKind t);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int n = 0;
  TestKind test = TestKind::kShapiroWilk;
};

/// Shapiro-Wilk normality test, Royston's AS R94 algorithm (W statistic
/// and p-value approximation). Valid for 3 <= n <= 5000; throws DataError
/// for n out of range or a zero-variance sample.
TestResult shapiro_wilk(std::span<const double> sample);

struct NormalParams {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Kolmogorov-Smirnov test against a normal distribution. With no fixed
/// parameters the mean and standard deviation are estimated from the
/// sample; the asymptotic p-value is then conservative (Lilliefors
/// effect), which mirrors the workflow this implements and is documented
/// rather than corrected.
TestResult ks_normality(std::span<const double> sample,
                        std::optional<NormalParams> fixed = std::nullopt);

/// Bartlett's equal-variance test across k groups; chi-squared statistic
/// with k-1 degrees of freedom. Throws DataError when any group is
/// degenerate (n < 2 or zero variance).
TestResult bartlett(const std::vector<std::vector<double>>& groups);

}  // namespace saralert

#endif  // SARALERT_STATS_HPP_

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

#include "saralert/stats.hpp"

#include <algorithm>
#include <cmath>

namespace saralert {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double z_quantile(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ConfigError("z_quantile: alpha must lie in (0, 1), got " +
                      std::to_string(alpha));

  // Wichura, ALGORITHM AS 241 (PPND16 coefficient set).
  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e2,
      1.9715909503065514427e3,  1.3731693765509461125e4,
      4.5921953931549871457e4,  6.7265770927008700853e4,
      3.3430575583588128105e4,  2.5090809287301226727e3};
  static const double b[8] = {
      1.0,                      4.2313330701600911252e1,
      6.8718700749205790830e2,  5.3941960214247511077e3,
      2.1213794301586595867e4,  3.9307895800092710610e4,
      2.8729085735721942674e4,  5.2264952788528545610e3};
  static const double c[8] = {
      1.42343711074968357734e0, 4.63033784615654529590e0,
      5.76949722146069140550e0, 3.64784832476320460504e0,
      1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,                      2.05319162663775882187e0,
      1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0, 5.46378491116411436990e0,
      1.78482653991729133580e0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,                      5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  auto poly = [](const double* p, double r) {
    return ((((((p[7] * r + p[6]) * r + p[5]) * r + p[4]) * r + p[3]) * r +
             p[2]) * r + p[1]) * r + p[0];
  };

  const double q = alpha - 0.5;
  double z;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    z = q * poly(a, r) / poly(b, r);
  } else {
    double r = q < 0.0 ? alpha : 1.0 - alpha;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
      r -= 1.6;
      z = poly(c, r) / poly(d, r);
    } else {
      r -= 5.0;
      z = poly(e, r) / poly(f, r);
    }
    if (q < 0.0) z = -z;
  }

  // One Newton step against the erfc-based CDF tightens the tails.
  const double pdf = normal_pdf(z);
  if (pdf > 0.0) z -= (normal_cdf(z) - alpha) / pdf;
  return z;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw ConfigError("regularized_gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;

  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // Series representation.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Continued fraction for Q(a, x), modified Lentz.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double chi2_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return 1.0 - regularized_gamma_p(dof / 2.0, x / 2.0);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::string test_kind_name(TestKind t) {
  switch (t) {
    case TestKind::kShapiroWilk:
      return "shapiro-wilk";
    case TestKind::kKolmogorovSmirnov:
      return "ks";
    case TestKind::kBartlett:
      return "bartlett";
  }
  return "?";
}

namespace {

void require_spread(std::span<const double> sorted) {
  if (sorted.front() == sorted.back())
    throw DataError("zero-variance sample");
}

}  // namespace

TestResult shapiro_wilk(std::span<const double> sample) {
  const int n = static_cast<int>(sample.size());
  if (n < 3 || n > 5000)
    throw DataError("shapiro_wilk: n must be in [3, 5000], got " +
                    std::to_string(n));
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  require_spread(x);

  // Royston (1995), AS R94: normal scores m, weight vector a.
  std::vector<double> m(n);
  for (int i = 0; i < n; ++i)
    m[i] = z_quantile((i + 1 - 0.375) / (n + 0.25));
  double ssm = 0.0;
  for (double v : m) ssm += v * v;
  const double rsn = 1.0 / std::sqrt(static_cast<double>(n));

  std::vector<double> w(n);
  const double cn = m[n - 1] / std::sqrt(ssm);
  if (n == 3) {
    w[0] = -std::sqrt(0.5);
    w[1] = 0.0;
    w[2] = std::sqrt(0.5);
  } else {
    const double an =
        -2.706056 * std::pow(rsn, 5) + 4.434685 * std::pow(rsn, 4) -
        2.071190 * std::pow(rsn, 3) - 0.147981 * rsn * rsn +
        0.221157 * rsn + cn;
    if (n <= 5) {
      const double phi = (ssm - 2.0 * m[n - 1] * m[n - 1]) /
                         (1.0 - 2.0 * an * an);
      const double root = std::sqrt(phi);
      for (int i = 1; i < n - 1; ++i) w[i] = m[i] / root;
      w[n - 1] = an;
      w[0] = -an;
    } else {
      const double cn1 = m[n - 2] / std::sqrt(ssm);
      const double an1 =
          -3.582633 * std::pow(rsn, 5) + 5.682633 * std::pow(rsn, 4) -
          1.752461 * std::pow(rsn, 3) - 0.293762 * rsn * rsn +
          0.042981 * rsn + cn1;
      const double phi =
          (ssm - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
          (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
      const double root = std::sqrt(phi);
      for (int i = 2; i < n - 2; ++i) w[i] = m[i] / root;
      w[n - 1] = an;
      w[n - 2] = an1;
      w[0] = -an;
      w[1] = -an1;
    }
  }

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += w[i] * x[i];
    den += (x[i] - mean) * (x[i] - mean);
  }
  double W = num * num / den;
  if (W > 1.0) W = 1.0;

  double p;
  if (n == 3) {
    constexpr double kPi6 = 1.90985931710274403;   // 6/pi
    constexpr double kStqr = 1.04719755119659775;  // asin(sqrt(3/4))
    p = kPi6 * (std::asin(std::sqrt(W)) - kStqr);
    p = std::clamp(p, 0.0, 1.0);
  } else if (n <= 11) {
    const double g = -2.273 + 0.459 * n;
    const double mu = 0.5440 - 0.39978 * n + 0.025054 * n * n -
                      0.0006714 * n * n * n;
    const double sigma = std::exp(1.3822 - 0.77857 * n + 0.062767 * n * n -
                                  0.0020322 * n * n * n);
    const double z = (-std::log(g - std::log1p(-W)) - mu) / sigma;
    p = 1.0 - normal_cdf(z);
  } else {
    const double ln = std::log(static_cast<double>(n));
    const double mu = -1.5861 - 0.31082 * ln - 0.083751 * ln * ln +
                      0.0038915 * ln * ln * ln;
    const double sigma =
        std::exp(-0.4803 - 0.082676 * ln + 0.0030302 * ln * ln);
    const double z = (std::log1p(-W) - mu) / sigma;
    p = 1.0 - normal_cdf(z);
  }
  return {W, p, n, TestKind::kShapiroWilk};
}

TestResult ks_normality(std::span<const double> sample,
                        std::optional<NormalParams> fixed) {
  const int n = static_cast<int>(sample.size());
  if (n < 1) throw DataError("ks_normality: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());

  double mu, sd;
  if (fixed) {
    mu = fixed->mean;
    sd = fixed->stddev;
    if (!(sd > 0.0)) throw DataError("ks_normality: stddev must be positive");
  } else {
    if (n < 2)
      throw DataError("ks_normality: need n >= 2 to estimate parameters");
    require_spread(x);
    mu = 0.0;
    for (double v : x) mu += v;
    mu /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    sd = std::sqrt(ss / (n - 1));
  }

  // D = sup |F_n - Phi|, attained at a jump point of the empirical CDF.
  double d_stat = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = normal_cdf((x[i] - mu) / sd);
    const double above = (i + 1.0) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d_stat = std::max({d_stat, above, below});
  }

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d_stat;
  return {d_stat, kolmogorov_sf(lambda), n, TestKind::kKolmogorovSmirnov};
}

TestResult bartlett(const std::vector<std::vector<double>>& groups) {
  const int k = static_cast<int>(groups.size());
  if (k < 2) throw DataError("bartlett: need at least 2 groups");

  double pooled = 0.0;
  double log_sum = 0.0;
  double inv_sum = 0.0;
  std::int64_t total = 0;
  std::vector<double> variances(k);
  for (int g = 0; g < k; ++g) {
    const auto& grp = groups[g];
    const int n = static_cast<int>(grp.size());
    if (n < 2)
      throw DataError("bartlett: group " + std::to_string(g) +
                      " has fewer than 2 values");
    double mean = 0.0;
    for (double v : grp) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : grp) ss += (v - mean) * (v - mean);
    const double var = ss / (n - 1);
    if (!(var > 0.0))
      throw DataError("bartlett: group " + std::to_string(g) +
                      " has zero variance");
    variances[g] = var;
    pooled += (n - 1) * var;
    log_sum += (n - 1) * std::log(var);
    inv_sum += 1.0 / (n - 1);
    total += n;
  }
  const double dof_total = static_cast<double>(total - k);
  pooled /= dof_total;
  const double correction =
      1.0 + (inv_sum - 1.0 / dof_total) / (3.0 * (k - 1));
  const double stat = (dof_total * std::log(pooled) - log_sum) / correction;
  const double p = chi2_sf(stat, static_cast<double>(k - 1));

  return {stat, p, static_cast<int>(total), TestKind::kBartlett};
}

}  // namespace saralert

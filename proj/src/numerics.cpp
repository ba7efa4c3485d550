/*
 * Copyright 2026 The localdrift Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "localdrift/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace localdrift::numerics {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

// P(a, x) by its power series; valid for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_inc_gamma: series did not converge");
}

// Q(a, x) by its continued fraction; valid for x >= a + 1.
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw std::runtime_error("reg_inc_gamma: continued fraction did not converge");
}

void check_gamma_domain(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || std::isnan(x)) {
    throw std::invalid_argument("incomplete gamma: need a > 0 and x >= 0");
  }
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sum_sq_dev(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

}  // namespace

double rbf_similarity_unchecked(std::span<const double> a,
                                std::span<const double> b) noexcept {
  double sq = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sq += d * d;
  }
  return std::exp(-sq / static_cast<double>(a.size()));
}

double rbf_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("rbf_similarity: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw std::invalid_argument("rbf_similarity: empty vectors");
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(a.begin(), a.end(), finite) ||
      !std::all_of(b.begin(), b.end(), finite)) {
    throw std::invalid_argument("rbf_similarity: non-finite input");
  }
  return rbf_similarity_unchecked(a, b);
}

double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(
        "reg_inc_beta: need 0 <= x <= 1, a > 0, b > 0");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  double result;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    result = front * beta_continued_fraction(x, a, b) / a;
  } else {
    result = 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
  }
  return std::clamp(result, 0.0, 1.0);
}

double reg_inc_gamma_lower(double a, double x) {
  check_gamma_domain(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::clamp(gamma_series(a, x), 0.0, 1.0);
  return std::clamp(1.0 - gamma_continued_fraction(a, x), 0.0, 1.0);
}

double reg_inc_gamma_upper(double a, double x) {
  check_gamma_domain(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_continued_fraction(a, x), 0.0, 1.0);
}

double chi2_survival(double x, double df) {
  if (!(df > 0.0) || !(x >= 0.0)) {
    throw std::invalid_argument("chi2_survival: need x >= 0 and df > 0");
  }
  return reg_inc_gamma_upper(0.5 * df, 0.5 * x);
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t: df must be > 0");
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  return reg_inc_beta(df / (df + t * t), 0.5 * df, 0.5);
}

TestResult t_test_unpaired(std::span<const double> sample_a,
                           std::span<const double> sample_b) {
  if (sample_a.size() < 2 || sample_b.size() < 2) {
    throw std::invalid_argument("t_test_unpaired: each sample needs >= 2 values");
  }
  const double na = static_cast<double>(sample_a.size());
  const double nb = static_cast<double>(sample_b.size());
  const double mean_a = mean_of(sample_a);
  const double mean_b = mean_of(sample_b);
  const double df = na + nb - 2.0;
  const double pooled =
      (sum_sq_dev(sample_a, mean_a) + sum_sq_dev(sample_b, mean_b)) / df;
  const double diff = mean_a - mean_b;

  TestResult result;
  result.df = df;
  if (pooled <= 0.0) {
    if (diff == 0.0) {
      result.statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.statistic = diff > 0.0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
    }
    return result;
  }
  result.statistic = diff / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  result.p_value = student_t_two_sided(result.statistic, df);
  return result;
}

TestResult fisher_combine(std::span<const double> p_values) {
  if (p_values.empty()) {
    throw std::invalid_argument("fisher_combine: no p-values");
  }
  double statistic = 0.0;
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("fisher_combine: p-value outside [0, 1]");
    }
    statistic -= 2.0 * std::log(std::max(p, kFisherPFloor));
  }
  // -0.0 when every p is 1.
  statistic = std::max(statistic, 0.0);
  const double df = 2.0 * static_cast<double>(p_values.size());
  return TestResult{statistic, chi2_survival(statistic, df), df};
}

double corrected_alpha(double alpha, int n_tests) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("corrected_alpha: alpha must be in (0, 1)");
  }
  if (n_tests < 1) {
    throw std::invalid_argument("corrected_alpha: need at least one test");
  }
  const double n = static_cast<double>(n_tests);
  return alpha * (n + 1.0) / (2.0 * n);
}

}  // namespace localdrift::numerics

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

#ifndef LOCALDRIFT_NUMERICS_HPP_
#define LOCALDRIFT_NUMERICS_HPP_

#include <span>

namespace localdrift::numerics {

// Outcome of a hypothesis test. `df` is the degrees of freedom of the
// reference distribution (t for the two-sample test, chi-square for Fisher).
struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 1.0;
};

// RBF kernel similarity exp(-||a - b||^2 / m) with m = a.size().
// Throws std::invalid_argument on length mismatch, empty or non-finite input.
double rbf_similarity(std::span<const double> a, std::span<const double> b);

// Same kernel without argument validation; used on hot paths where the
// vectors are known to be finite and of equal length.
double rbf_similarity_unchecked(std::span<const double> a,
                                std::span<const double> b) noexcept;

// Pooled-variance Student t-test, two-sided. Both samples need >= 2 values.
// If the pooled variance is zero the verdict is forced: p = 1 for equal
// means, p = 0 otherwise (statistic is reported as 0 / +-inf).
TestResult t_test_unpaired(std::span<const double> sample_a,
                           std::span<const double> sample_b);

// Fisher's method. statistic = -2 sum ln p_i, df = 2N. Zero p-values are
// floored at kFisherPFloor.
inline constexpr double kFisherPFloor = 1e-300;
TestResult fisher_combine(std::span<const double> p_values);

// alpha * (N + 1) / (2N).
double corrected_alpha(double alpha, int n_tests);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double reg_inc_gamma_lower(double a, double x);
double reg_inc_gamma_upper(double a, double x);

// Upper tail of the chi-square distribution, Q(df/2, x/2).
double chi2_survival(double x, double df);

// Two-sided p-value of a Student t statistic with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

}  // namespace localdrift::numerics

#endif  // LOCALDRIFT_NUMERICS_HPP_

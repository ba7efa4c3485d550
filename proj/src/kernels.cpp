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

#include "localdrift/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "localdrift/numerics.hpp"

#ifdef LOCALDRIFT_HAVE_OPENMP
#include <omp.h>
#endif

namespace localdrift::kernels {

namespace {

// Work (in scalar multiply-adds) below which the dispatchers stay serial.
constexpr std::size_t kParallelWork = std::size_t{1} << 18;

// Lexicographic (similarity, first, second) order; smaller is better.
bool better(const DissimilarPair& a, const DissimilarPair& b) {
  if (a.similarity != b.similarity) return a.similarity < b.similarity;
  if (a.first != b.first) return a.first < b.first;
  return a.second < b.second;
}

void check_pair_input(const Rows& rows) {
  if (rows.dim == 0 || rows.count() < 2) {
    throw std::invalid_argument("most_dissimilar_pair: need >= 2 rows");
  }
}

void check_attribution_input(const LinearModelView& model, const Rows& xs,
                             std::span<double> out) {
  if (model.weights.size() != xs.dim || model.reference.size() != xs.dim ||
      out.size() != xs.data.size()) {
    throw std::invalid_argument("linear_attributions: shape mismatch");
  }
}

}  // namespace

namespace serial {

DissimilarPair most_dissimilar_pair(const Rows& rows) {
  check_pair_input(rows);
  const std::size_t n = rows.count();
  DissimilarPair best{0, 1, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s =
          numerics::rbf_similarity_unchecked(rows.row(i), rows.row(j));
      if (s < best.similarity) best = {i, j, s};
    }
  }
  return best;
}

double min_similarity(const Rows& rows, std::span<const double> point) {
  double lo = 1.0;
  for (std::size_t i = 0; i < rows.count(); ++i) {
    lo = std::min(lo, numerics::rbf_similarity_unchecked(rows.row(i), point));
  }
  return lo;
}

void linear_attributions(const LinearModelView& model, const Rows& xs,
                         std::span<double> out) {
  check_attribution_input(model, xs, out);
  const std::size_t m = xs.dim;
  for (std::size_t i = 0; i < xs.count(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out[i * m + j] =
          model.weights[j] * (xs.data[i * m + j] - model.reference[j]);
    }
  }
}

}  // namespace serial

namespace parallel {

#ifdef LOCALDRIFT_HAVE_OPENMP

DissimilarPair most_dissimilar_pair(const Rows& rows) {
  check_pair_input(rows);
  const auto n = static_cast<std::int64_t>(rows.count());
  DissimilarPair best{0, 1, std::numeric_limits<double>::infinity()};
#pragma omp parallel
  {
    DissimilarPair local{0, 1, std::numeric_limits<double>::infinity()};
    // Rows near the top have the most partners; dynamic balances that.
#pragma omp for schedule(dynamic, 4) nowait
    for (std::int64_t i = 0; i < n - 1; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (std::size_t j = ui + 1; j < static_cast<std::size_t>(n); ++j) {
        const double s =
            numerics::rbf_similarity_unchecked(rows.row(ui), rows.row(j));
        const DissimilarPair cand{ui, j, s};
        if (better(cand, local)) local = cand;
      }
    }
#pragma omp critical(localdrift_pair_reduce)
    {
      if (better(local, best)) best = local;
    }
  }
  return best;
}

double min_similarity(const Rows& rows, std::span<const double> point) {
  const auto n = static_cast<std::int64_t>(rows.count());
  double lo = 1.0;
#pragma omp parallel for reduction(min : lo) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    lo = std::min(lo, numerics::rbf_similarity_unchecked(
                          rows.row(static_cast<std::size_t>(i)), point));
  }
  return lo;
}

void linear_attributions(const LinearModelView& model, const Rows& xs,
                         std::span<double> out) {
  check_attribution_input(model, xs, out);
  const std::size_t m = xs.dim;
  const auto n = static_cast<std::int64_t>(xs.count());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto base = static_cast<std::size_t>(i) * m;
    for (std::size_t j = 0; j < m; ++j) {
      out[base + j] = model.weights[j] * (xs.data[base + j] - model.reference[j]);
    }
  }
}

#else

DissimilarPair most_dissimilar_pair(const Rows& rows) {
  return serial::most_dissimilar_pair(rows);
}
double min_similarity(const Rows& rows, std::span<const double> point) {
  return serial::min_similarity(rows, point);
}
void linear_attributions(const LinearModelView& model, const Rows& xs,
                         std::span<double> out) {
  serial::linear_attributions(model, xs, out);
}

#endif

}  // namespace parallel

DissimilarPair most_dissimilar_pair(const Rows& rows) {
  const std::size_t n = rows.count();
  if (max_threads() > 1 && n * n / 2 * rows.dim >= kParallelWork) {
    return parallel::most_dissimilar_pair(rows);
  }
  return serial::most_dissimilar_pair(rows);
}

double min_similarity(const Rows& rows, std::span<const double> point) {
  if (max_threads() > 1 && rows.data.size() >= kParallelWork) {
    return parallel::min_similarity(rows, point);
  }
  return serial::min_similarity(rows, point);
}

void linear_attributions(const LinearModelView& model, const Rows& xs,
                         std::span<double> out) {
  if (max_threads() > 1 && xs.data.size() >= kParallelWork) {
    parallel::linear_attributions(model, xs, out);
    return;
  }
  serial::linear_attributions(model, xs, out);
}

int max_threads() {
#ifdef LOCALDRIFT_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace localdrift::kernels

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

#ifndef LOCALDRIFT_KERNELS_HPP_
#define LOCALDRIFT_KERNELS_HPP_

#include <cstddef>
#include <span>

// Data-parallel inner loops of the detector. Each kernel has a serial
// reference implementation and an OpenMP implementation that must return
// bit-identical results (ties are resolved by index, never by thread order).
// Without OpenMP the parallel variants fall back to the serial ones.
namespace localdrift::kernels {

// Row-major n x dim matrix view.
struct Rows {
  std::span<const double> data;
  std::size_t dim = 0;

  std::size_t count() const { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> row(std::size_t i) const {
    return data.subspan(i * dim, dim);
  }
};

// Pair (first < second) with the smallest RBF similarity. The first pair in
// row-major scan order wins ties.
struct DissimilarPair {
  std::size_t first = 0;
  std::size_t second = 0;
  double similarity = 1.0;
};

// Attribution of one observation against a linear margin model:
// out[j] = weights[j] * (x[j] - reference[j]).
struct LinearModelView {
  std::span<const double> weights;
  std::span<const double> reference;
};

namespace serial {
DissimilarPair most_dissimilar_pair(const Rows& rows);
double min_similarity(const Rows& rows, std::span<const double> point);
void linear_attributions(const LinearModelView& model, const Rows& xs,
                         std::span<double> out);
}  // namespace serial

namespace parallel {
DissimilarPair most_dissimilar_pair(const Rows& rows);
double min_similarity(const Rows& rows, std::span<const double> point);
void linear_attributions(const LinearModelView& model, const Rows& xs,
                         std::span<double> out);
}  // namespace parallel

// Dispatchers used by the library: parallel above a work threshold.
DissimilarPair most_dissimilar_pair(const Rows& rows);
double min_similarity(const Rows& rows, std::span<const double> point);
void linear_attributions(const LinearModelView& model, const Rows& xs,
                         std::span<double> out);

// Number of threads the parallel variants would use (1 without OpenMP).
int max_threads();

}  // namespace localdrift::kernels

#endif  // LOCALDRIFT_KERNELS_HPP_

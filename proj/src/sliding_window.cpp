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

#include "localdrift/sliding_window.hpp"

#include <algorithm>
#include <stdexcept>

namespace localdrift {

SlidingWindow::SlidingWindow(std::size_t capacity, std::size_t dim)
    : capacity_(capacity),
      dim_(dim),
      xs_(2 * capacity * dim),
      diffs_(2 * capacity),
      times_(2 * capacity) {
  if (capacity == 0) throw std::invalid_argument("SlidingWindow: capacity 0");
  if (dim == 0) throw std::invalid_argument("SlidingWindow: dimension 0");
}

void SlidingWindow::push(std::span<const double> x, double diff,
                         std::int64_t t) {
  if (x.size() != dim_) {
    throw std::invalid_argument("SlidingWindow::push: dimension mismatch");
  }
  if (size_ == capacity_) {
    ++begin_;
    --size_;
  }
  if (begin_ + size_ == 2 * capacity_) compact();
  const std::size_t slot = begin_ + size_;
  std::copy(x.begin(), x.end(), xs_.begin() + slot * dim_);
  diffs_[slot] = diff;
  times_[slot] = t;
  ++size_;
}

void SlidingWindow::compact() {
  std::copy(xs_.begin() + begin_ * dim_, xs_.begin() + (begin_ + size_) * dim_,
            xs_.begin());
  std::copy(diffs_.begin() + begin_, diffs_.begin() + begin_ + size_,
            diffs_.begin());
  std::copy(times_.begin() + begin_, times_.begin() + begin_ + size_,
            times_.begin());
  begin_ = 0;
}

void SlidingWindow::mean(std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (size_ == 0) return;
  const auto data = rows();
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out[j] += data[i * dim_ + j];
  }
  const double inv = 1.0 / static_cast<double>(size_);
  for (auto& v : out) v *= inv;
}

}  // namespace localdrift

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

#ifndef LOCALDRIFT_SLIDING_WINDOW_HPP_
#define LOCALDRIFT_SLIDING_WINDOW_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace localdrift {

// Bounded FIFO of (x, diff, t) triples. Entries are kept contiguous in
// arrival order (index 0 is the oldest), so `rows()` can be handed to the
// kernels as a dense row-major matrix. Storage is 2x capacity and compacted
// when the tail hits the end, giving amortized O(dim) pushes.
class SlidingWindow {
 public:
  SlidingWindow(std::size_t capacity, std::size_t dim);

  // Appends an entry, evicting the oldest one when full.
  void push(std::span<const double> x, double diff, std::int64_t t);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size_ == 0; }
  bool full() const { return size_ == capacity_; }

  std::span<const double> x(std::size_t i) const {
    return {xs_.data() + (begin_ + i) * dim_, dim_};
  }
  double diff(std::size_t i) const { return diffs_[begin_ + i]; }
  std::int64_t time(std::size_t i) const { return times_[begin_ + i]; }

  std::span<const double> rows() const {
    return {xs_.data() + begin_ * dim_, size_ * dim_};
  }
  std::span<const double> diffs() const {
    return {diffs_.data() + begin_, size_};
  }
  std::span<const std::int64_t> times() const {
    return {times_.data() + begin_, size_};
  }

  // Column means of the stored observations; `out` must have dim() entries.
  void mean(std::span<double> out) const;

 private:
  void compact();

  std::size_t capacity_;
  std::size_t dim_;
  std::size_t begin_ = 0;
  std::size_t size_ = 0;
  std::vector<double> xs_;
  std::vector<double> diffs_;
  std::vector<std::int64_t> times_;
};

}  // namespace localdrift

#endif  // LOCALDRIFT_SLIDING_WINDOW_HPP_

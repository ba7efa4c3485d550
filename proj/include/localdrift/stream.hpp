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

#ifndef LOCALDRIFT_STREAM_HPP_
#define LOCALDRIFT_STREAM_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace localdrift {

struct Observation {
  std::int64_t t = 0;
  std::vector<double> x;
};

struct LabeledObservation {
  Observation obs;
  int y = 0;
};

// Raised for malformed input files; the message names row and column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StreamMetadata {
  std::size_t num_features = 0;
  int num_classes = 0;
  std::vector<std::int64_t> drift_positions;
  std::vector<std::string> feature_names;
  std::string label_name = "label";
};

// One observation per time step, strictly increasing t.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual std::optional<LabeledObservation> next() = 0;
  virtual void rewind() = 0;
  virtual const StreamMetadata& metadata() const = 0;
};

// Fully buffered stream. t is the row index.
class BufferedStream final : public StreamSource {
 public:
  BufferedStream() = default;
  BufferedStream(StreamMetadata meta, std::vector<LabeledObservation> rows);

  std::optional<LabeledObservation> next() override;
  void rewind() override { cursor_ = 0; }
  const StreamMetadata& metadata() const override { return meta_; }

  std::size_t size() const { return rows_.size(); }
  const std::vector<LabeledObservation>& rows() const { return rows_; }
  std::vector<LabeledObservation>& mutable_rows() { return rows_; }
  StreamMetadata& mutable_metadata() { return meta_; }

 private:
  StreamMetadata meta_;
  std::vector<LabeledObservation> rows_;
  std::size_t cursor_ = 0;
};

struct CsvOptions {
  // Column name (with header) or 0-based index. Empty selects the last column.
  std::string label_column;
  bool has_header = true;
};

// Reads a comma-separated file. A column is numeric if its first value
// parses as a number, categorical otherwise; categorical values are encoded
// 0, 1, ... by first appearance. Labels that are all non-negative integers
// are used as-is, any other label column is first-appearance encoded.
BufferedStream read_csv(const std::filesystem::path& path,
                        const CsvOptions& options);

// Writes features then label, shortest round-trip decimal representation.
void write_csv(const std::filesystem::path& path, const BufferedStream& stream);

// Per-feature min-max scaler.
struct Normalizer {
  std::vector<double> min;
  std::vector<double> max;
};

// One pass over `source` (rewound afterwards). Throws on an empty source.
Normalizer fit_normalizer(StreamSource& source);

// (x - min) / (max - min); constant features map to 0. No clamping.
Observation normalize(const Normalizer& n, const Observation& obs);
void normalize_in_place(const Normalizer& n, std::span<double> x);

}  // namespace localdrift

#endif  // LOCALDRIFT_STREAM_HPP_

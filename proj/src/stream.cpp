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

#include "localdrift/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace localdrift {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<long long> parse_non_negative_int(std::string_view s) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
    return std::nullopt;
  }
  return value;
}

std::string where(std::size_t line_no, std::size_t column,
                  const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "line " << line_no << ", column " << column + 1;
  if (column < names.size() && !names[column].empty()) {
    os << " ('" << names[column] << "')";
  }
  return os.str();
}

std::size_t resolve_label_column(const std::string& spec,
                                 const std::vector<std::string>& header,
                                 std::size_t n_fields) {
  if (spec.empty()) return n_fields - 1;
  const auto it = std::find(header.begin(), header.end(), spec);
  if (it != header.end()) {
    return static_cast<std::size_t>(it - header.begin());
  }
  if (const auto idx = parse_non_negative_int(spec)) {
    if (static_cast<std::size_t>(*idx) < n_fields) {
      return static_cast<std::size_t>(*idx);
    }
  }
  throw ParseError("label column '" + spec + "' not found");
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

BufferedStream::BufferedStream(StreamMetadata meta,
                               std::vector<LabeledObservation> rows)
    : meta_(std::move(meta)), rows_(std::move(rows)) {}

std::optional<LabeledObservation> BufferedStream::next() {
  if (cursor_ >= rows_.size()) return std::nullopt;
  return rows_[cursor_++];
}

BufferedStream read_csv(const std::filesystem::path& path,
                        const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t n_fields = 0;
  std::size_t label_col = 0;
  bool layout_known = false;

  enum class Kind { kNumeric, kCategorical };
  std::vector<Kind> kinds;
  std::vector<std::unordered_map<std::string, int>> categories;
  std::vector<std::string> raw_labels;
  std::vector<std::vector<double>> features;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (!layout_known) {
      n_fields = fields.size();
      if (n_fields < 2) {
        throw ParseError("row " + std::to_string(line_no) +
                         ": need at least one feature and a label");
      }
      if (options.has_header) {
        header.assign(fields.begin(), fields.end());
        label_col = resolve_label_column(options.label_column, header, n_fields);
        layout_known = true;
        continue;
      }
      label_col = resolve_label_column(options.label_column, header, n_fields);
      layout_known = true;
    }
    if (fields.size() != n_fields) {
      throw ParseError("row " + std::to_string(line_no) + ": expected " +
                       std::to_string(n_fields) + " fields, found " +
                       std::to_string(fields.size()));
    }
    if (kinds.empty()) {
      kinds.resize(n_fields);
      categories.resize(n_fields);
      for (std::size_t c = 0; c < n_fields; ++c) {
        kinds[c] = parse_double(fields[c]) ? Kind::kNumeric : Kind::kCategorical;
      }
    }
    std::vector<double> x;
    x.reserve(n_fields - 1);
    for (std::size_t c = 0; c < n_fields; ++c) {
      const auto field = fields[c];
      if (field.empty()) {
        throw ParseError("missing value at " + where(line_no, c, header));
      }
      if (c == label_col) {
        raw_labels.emplace_back(field);
        continue;
      }
      if (kinds[c] == Kind::kNumeric) {
        const auto v = parse_double(field);
        if (!v) {
          throw ParseError("non-numeric value '" + std::string(field) +
                           "' at " + where(line_no, c, header));
        }
        if (!std::isfinite(*v)) {
          throw ParseError("non-finite value at " + where(line_no, c, header));
        }
        x.push_back(*v);
      } else {
        auto& map = categories[c];
        const auto [it, inserted] =
            map.try_emplace(std::string(field), static_cast<int>(map.size()));
        x.push_back(static_cast<double>(it->second));
      }
    }
    features.push_back(std::move(x));
  }
  if (!layout_known) throw ParseError("'" + path.string() + "' is empty");

  StreamMetadata meta;
  meta.num_features = n_fields - 1;
  for (std::size_t c = 0; c < n_fields; ++c) {
    const std::string name =
        c < header.size() ? header[c] : "x" + std::to_string(c);
    if (c == label_col) {
      meta.label_name = c < header.size() ? header[c] : "label";
    } else {
      meta.feature_names.push_back(name);
    }
  }

  std::vector<int> labels(raw_labels.size());
  bool integral = true;
  long long max_label = -1;
  for (std::size_t i = 0; i < raw_labels.size() && integral; ++i) {
    const auto v = parse_non_negative_int(raw_labels[i]);
    if (!v || *v > 1'000'000) {
      integral = false;
    } else {
      labels[i] = static_cast<int>(*v);
      max_label = std::max(max_label, *v);
    }
  }
  if (integral) {
    meta.num_classes = static_cast<int>(max_label + 1);
  } else {
    std::unordered_map<std::string, int> codes;
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
      const auto [it, inserted] =
          codes.try_emplace(raw_labels[i], static_cast<int>(codes.size()));
      labels[i] = it->second;
    }
    meta.num_classes = static_cast<int>(codes.size());
  }

  std::vector<LabeledObservation> rows;
  rows.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    rows.push_back({{static_cast<std::int64_t>(i), std::move(features[i])},
                    labels[i]});
  }
  return BufferedStream(std::move(meta), std::move(rows));
}

void write_csv(const std::filesystem::path& path, const BufferedStream& stream) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  const auto& meta = stream.metadata();
  std::string buf;
  for (std::size_t j = 0; j < meta.num_features; ++j) {
    buf += j < meta.feature_names.size() ? meta.feature_names[j]
                                         : "x" + std::to_string(j);
    buf += ',';
  }
  buf += meta.label_name;
  buf += '\n';
  for (const auto& row : stream.rows()) {
    for (double v : row.obs.x) {
      append_number(buf, v);
      buf += ',';
    }
    buf += std::to_string(row.y);
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

Normalizer fit_normalizer(StreamSource& source) {
  Normalizer n;
  bool any = false;
  while (auto row = source.next()) {
    const auto& x = row->obs.x;
    if (!any) {
      n.min = x;
      n.max = x;
      any = true;
      continue;
    }
    if (x.size() != n.min.size()) {
      throw std::invalid_argument("fit_normalizer: inconsistent feature count");
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
      n.min[j] = std::min(n.min[j], x[j]);
      n.max[j] = std::max(n.max[j], x[j]);
    }
  }
  source.rewind();
  if (!any) throw std::invalid_argument("fit_normalizer: empty source");
  return n;
}

void normalize_in_place(const Normalizer& n, std::span<double> x) {
  if (x.size() != n.min.size()) {
    throw std::invalid_argument("normalize: expected " +
                                std::to_string(n.min.size()) +
                                " features, got " + std::to_string(x.size()));
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double range = n.max[j] - n.min[j];
    x[j] = range > 0.0 ? (x[j] - n.min[j]) / range : 0.0;
  }
}

Observation normalize(const Normalizer& n, const Observation& obs) {
  Observation out = obs;
  normalize_in_place(n, out.x);
  return out;
}

}  // namespace localdrift

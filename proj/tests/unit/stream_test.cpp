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

#include <fstream>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "localdrift/sliding_window.hpp"
#include "localdrift/stream.hpp"
#include "test_data.hpp"

namespace localdrift {
namespace {

using V = std::vector<double>;

std::filesystem::path write_file(const std::string& name, const std::string& body) {
  const auto dir = testing::scratch_dir("stream_" + name);
  const auto path = dir / (name + ".csv");
  std::ofstream(path) << body;
  return path;
}

TEST(ReadCsv, ThreeRowsWithHeader) {
  const auto p = write_file("three", "a,b,y\n1,2,0\n3,4,1\n5,6,0\n");
  auto s = read_csv(p, {});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.metadata().num_features, 2u);
  EXPECT_EQ(s.metadata().feature_names, (std::vector<std::string>{"a", "b"}));
  std::int64_t expected_t = 0;
  while (auto row = s.next()) EXPECT_EQ(row->obs.t, expected_t++);
  EXPECT_EQ(s.rows()[1].obs.x, (V{3, 4}));
  EXPECT_EQ(s.rows()[1].y, 1);
}

TEST(ReadCsv, NamedStringLabelIsEncodedByFirstAppearance) {
  const auto p = write_file("named", "class,x\na,1\nb,2\na,3\n");
  CsvOptions o;
  o.label_column = "class";
  auto s = read_csv(p, o);
  EXPECT_EQ(s.rows()[0].y, 0);
  EXPECT_EQ(s.rows()[1].y, 1);
  EXPECT_EQ(s.rows()[2].y, 0);
  EXPECT_EQ(s.metadata().num_classes, 2);
  EXPECT_EQ(s.rows()[2].obs.x, (V{3}));
}

TEST(ReadCsv, IndexLabelAndNoHeader) {
  const auto p = write_file("index", "1,0.5,2\n0,0.25,3\n");
  CsvOptions o;
  o.label_column = "0";
  o.has_header = false;
  auto s = read_csv(p, o);
  EXPECT_EQ(s.rows()[0].y, 1);
  EXPECT_EQ(s.rows()[1].obs.x, (V{0.25, 3}));
}

TEST(ReadCsv, CategoricalFeatureIsEncoded) {
  const auto p = write_file("cat", "color,y\nred,0\nblue,1\nred,1\n");
  auto s = read_csv(p, {});
  EXPECT_EQ(s.rows()[0].obs.x[0], 0.0);
  EXPECT_EQ(s.rows()[1].obs.x[0], 1.0);
  EXPECT_EQ(s.rows()[2].obs.x[0], 0.0);
}

TEST(ReadCsv, TextInNumericColumnCitesRowAndColumn) {
  const auto p = write_file("bad", "a,b,c,d,e,y\n1,2,3,4,5,0\n1,2,3,oops,5,1\n");
  try {
    read_csv(p, {});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 4"), std::string::npos) << msg;
  }
}

TEST(ReadCsv, RaggedAndMissing) {
  EXPECT_THROW(read_csv(write_file("ragged", "a,y\n1,0\n2\n"), {}), ParseError);
  EXPECT_THROW(read_csv(write_file("missing", "a,b,y\n1,,0\n"), {}), ParseError);
  EXPECT_THROW(read_csv(write_file("nolabel", "a,y\n1,0\n"),
                        CsvOptions{"nope", true}),
               ParseError);
  EXPECT_THROW(read_csv("/nonexistent/file.csv", {}), std::exception);
}

TEST(WriteCsv, RoundTrips) {
  const auto p = write_file("src", "a,b,y\n0.1,1e-7,0\n3.25,-4,1\n");
  const auto s = read_csv(p, {});
  const auto out = p.parent_path() / "copy.csv";
  write_csv(out, s);
  const auto back = read_csv(out, {});
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back.rows()[i].obs.x, s.rows()[i].obs.x);
    EXPECT_EQ(back.rows()[i].y, s.rows()[i].y);
  }
}

BufferedStream stream_of(const std::vector<V>& xs) {
  StreamMetadata meta;
  meta.num_features = xs.front().size();
  meta.num_classes = 2;
  std::vector<LabeledObservation> rows;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rows.push_back({{static_cast<std::int64_t>(i), xs[i]}, 0});
  }
  return BufferedStream(meta, rows);
}

TEST(Normalizer, FitExamples) {
  auto a = stream_of({{2}, {4}, {6}});
  auto n = fit_normalizer(a);
  EXPECT_EQ(n.min, (V{2}));
  EXPECT_EQ(n.max, (V{6}));
  auto b = stream_of({{5}, {5}});
  n = fit_normalizer(b);
  EXPECT_EQ(n.min, n.max);
  auto c = stream_of({{0, 10}, {1, 20}});
  n = fit_normalizer(c);
  EXPECT_EQ(n.min, (V{0, 10}));
  EXPECT_EQ(n.max, (V{1, 20}));
  // The source is rewound.
  EXPECT_TRUE(c.next().has_value());
}

TEST(Normalizer, EmptySourceThrows) {
  BufferedStream empty;
  EXPECT_THROW(fit_normalizer(empty), std::invalid_argument);
}

TEST(Normalizer, ApplyExamples) {
  const Normalizer n{{2}, {6}};
  EXPECT_EQ(normalize(n, Observation{0, {4}}).x[0], 0.5);
  const Normalizer constant{{5}, {5}};
  EXPECT_EQ(normalize(constant, Observation{0, {5}}).x[0], 0.0);
  const Normalizer wide{{0}, {10}};
  EXPECT_EQ(normalize(wide, Observation{0, {-5}}).x[0], -0.5);
}

TEST(SlidingWindow, EvictsOldestAndKeepsOrder) {
  SlidingWindow w(4, 2);
  for (int t = 0; t < 11; ++t) {
    w.push(V{double(t), double(-t)}, t * 0.5, t);
    EXPECT_EQ(w.size(), std::min(t + 1, 4));
  }
  EXPECT_TRUE(w.full());
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(w.time(i), 7 + static_cast<std::int64_t>(i));
    EXPECT_EQ(w.x(i)[0], 7.0 + i);
    EXPECT_EQ(w.diff(i), (7.0 + i) * 0.5);
    EXPECT_EQ(w.rows()[2 * i + 1], -(7.0 + i));
  }
  V mean(2);
  w.mean(mean);
  EXPECT_DOUBLE_EQ(mean[0], 8.5);
  EXPECT_DOUBLE_EQ(mean[1], -8.5);
}

TEST(SlidingWindow, RejectsWrongDimension) {
  SlidingWindow w(4, 2);
  EXPECT_THROW(w.push(V{1.0}, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(SlidingWindow(0, 2), std::invalid_argument);
}

TEST(SlidingWindow, MatchesNaiveDequeUnderRandomPushes) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  SlidingWindow w(7, 3);
  std::vector<V> naive;
  for (int t = 0; t < 300; ++t) {
    V x{u(rng), u(rng), u(rng)};
    w.push(x, u(rng), t);
    naive.push_back(x);
    if (naive.size() > 7) naive.erase(naive.begin());
    ASSERT_EQ(w.size(), naive.size());
    for (std::size_t i = 0; i < naive.size(); ++i) {
      const auto row = w.x(i);
      ASSERT_EQ(V(row.begin(), row.end()), naive[i]);
    }
  }
}

}  // namespace
}  // namespace localdrift

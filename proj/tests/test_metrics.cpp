// Copyright 2026 The hostload Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hostload/errors.hpp"
#include "hostload/esp.hpp"
#include "hostload/metrics.hpp"

namespace hostload {
namespace {

using V = std::vector<double>;

SegmentScheme scheme_of(std::vector<std::size_t> lengths) {
  SegmentScheme s;
  s.lengths = lengths;
  for (auto l : lengths) s.total += l;
  return s;
}

TEST(Msse, Examples) {
  EXPECT_EQ(msse(V{1, 2, 3}, V{1, 2, 3}, make_scheme(3)), 0.0);
  EXPECT_NEAR(msse(V{1, 1, 1}, V{0, 0, 0}, make_scheme(3)), 1.0, 1e-12);
  EXPECT_NEAR(msse(V{0, 1}, V{0, 0}, make_scheme(2)), 0.5, 1e-12);
  EXPECT_THROW(msse(V{0, 1}, V{0}, make_scheme(2)), ShapeError);
  EXPECT_THROW(msse(V{0, 1}, V{0, 1}, make_scheme(3)), ShapeError);
}

TEST(Msse, Properties) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const V l1{u(rng)}, t1{u(rng)};
    EXPECT_NEAR(msse(l1, t1, make_scheme(1)), (l1[0] - t1[0]) * (l1[0] - t1[0]), 1e-12);
    const std::size_t n = 2 + trial % 6;
    V l(n), t(n);
    for (auto& x : l) x = u(rng);
    for (auto& x : t) x = u(rng);
    const double base = msse(l, t, make_scheme(n, 1));
    EXPECT_GE(base, 0.0);
    EXPECT_NEAR(msse(l, t, make_scheme(n, 3)), base, 1e-12);
  }
  const SegmentScheme odd = scheme_of({3, 1, 5});
  const SegmentScheme scaled = scheme_of({6, 2, 10});
  EXPECT_NEAR(msse(V{1, 2, 3}, V{0, 0, 1}, odd), msse(V{1, 2, 3}, V{0, 0, 1}, scaled), 1e-12);
}

TEST(Mse, Examples) {
  EXPECT_EQ(mse(V{1, 2}, V{1, 2}), 0.0);
  EXPECT_NEAR(mse(V{1, 2}, V{0, 0}), 2.5, 1e-12);
  EXPECT_NEAR(mse(V{3}, V{1}), 4.0, 1e-12);
  EXPECT_THROW(mse(V{1, 2}, V{1}), ShapeError);
  EXPECT_THROW(mse(V{}, V{}), ShapeError);
}

TEST(Mse, SymmetryAndShift) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 9;
    V a(n), b(n), as(n), bs(n);
    const double c = u(rng);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      as[i] = a[i] + c;
      bs[i] = b[i] + c;
    }
    EXPECT_EQ(mse(a, b), mse(b, a));
    EXPECT_NEAR(mse(as, bs), mse(a, b), 1e-10);
  }
}

TEST(Cdf, Examples) {
  EXPECT_EQ(cdf_points(V{5}), (std::vector<CdfPoint>{{5, 1.0}}));
  EXPECT_EQ(cdf_points(V{1, 1, 2, 4}), (std::vector<CdfPoint>{{1, 0.5}, {2, 0.75}, {4, 1.0}}));
  EXPECT_EQ(cdf_points(V{4, 1, 2, 1}), cdf_points(V{1, 1, 2, 4}));
  EXPECT_THROW(cdf_points(V{}), DataError);
}

TEST(Cdf, LookupAtThreshold) {
  const auto cdf = cdf_points(V{0.01, 0.02, 0.025, 0.03, 0.5});
  EXPECT_DOUBLE_EQ(cdf_fraction_at(cdf, 0.025), 0.6);
  EXPECT_DOUBLE_EQ(cdf_fraction_at(cdf, 0.001), 0.0);
  EXPECT_DOUBLE_EQ(cdf_fraction_at(cdf, 0.0299), 0.6);
  EXPECT_DOUBLE_EQ(cdf_fraction_at(cdf, 9.0), 1.0);
}

TEST(Cdf, MonotoneAndEndsAtOne) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(0, 20);
  for (int trial = 0; trial < 200; ++trial) {
    V v(1 + trial % 30);
    for (auto& x : v) x = u(rng) * 0.1;
    const auto cdf = cdf_points(v);
    EXPECT_EQ(cdf.back().fraction, 1.0);
    for (std::size_t i = 1; i < cdf.size(); ++i) {
      EXPECT_LT(cdf[i - 1].value, cdf[i].value);
      EXPECT_LT(cdf[i - 1].fraction, cdf[i].fraction);
    }
  }
}

TEST(Boxplot, Examples) {
  const BoxplotSummary a = boxplot_summary(V{1, 2, 3, 4, 5});
  EXPECT_EQ(a.min, 1);
  EXPECT_EQ(a.q1, 2);
  EXPECT_EQ(a.median, 3);
  EXPECT_EQ(a.q3, 4);
  EXPECT_EQ(a.max, 5);
  const BoxplotSummary b = boxplot_summary(V{7});
  EXPECT_EQ(b.min, 7);
  EXPECT_EQ(b.q1, 7);
  EXPECT_EQ(b.q3, 7);
  EXPECT_EQ(b.max, 7);
  const BoxplotSummary c = boxplot_summary(V{4, 1, 3, 2});
  EXPECT_NEAR(c.q1, 1.75, 1e-12);
  EXPECT_NEAR(c.median, 2.5, 1e-12);
  EXPECT_NEAR(c.q3, 3.25, 1e-12);
  EXPECT_THROW(boxplot_summary(V{}), DataError);
}

TEST(Boxplot, OrderedQuartiles) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    V v(1 + trial % 25);
    for (auto& x : v) x = n(rng);
    const BoxplotSummary s = boxplot_summary(v);
    EXPECT_LE(s.min, s.q1);
    EXPECT_LE(s.q1, s.median);
    EXPECT_LE(s.median, s.q3);
    EXPECT_LE(s.q3, s.max);
    EXPECT_EQ(s.min, *std::min_element(v.begin(), v.end()));
    EXPECT_EQ(s.max, *std::max_element(v.begin(), v.end()));
  }
}

TEST(Summarize, SortsAndAverages) {
  EvalReport r;
  r.per_machine = {{"m3", 0.3}, {"m1", 0.1}, {"m2", 0.2}};
  const EvalReport s = summarize(r);
  EXPECT_EQ(s.per_machine[0].machine_id, "m1");
  EXPECT_EQ(s.per_machine[2].machine_id, "m3");
  EXPECT_NEAR(s.mean, 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(s.box.median, 0.2);
  EXPECT_EQ(s.cdf.size(), 3u);
}

}  // namespace
}  // namespace hostload

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

#include "hostload/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hostload/errors.hpp"

namespace hostload {

double msse(std::span<const double> predicted, std::span<const double> truth,
            const SegmentScheme& scheme) {
  const std::size_t n = scheme.segments();
  if (predicted.size() != n || truth.size() != n) {
    throw ShapeError("msse: patterns of length " + std::to_string(predicted.size()) + " and " +
                     std::to_string(truth.size()) + " for " + std::to_string(n) + " segments");
  }
  if (n == 0) throw ShapeError("msse: empty scheme");
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(scheme.lengths[i]);
    const double d = predicted[i] - truth[i];
    weighted += s * d * d;
    total += s;
  }
  return weighted / total;
}

double mse(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size()) {
    throw ShapeError("mse: lengths " + std::to_string(predicted.size()) + " and " +
                     std::to_string(truth.size()));
  }
  if (predicted.empty()) throw ShapeError("mse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - truth[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predicted.size());
}

std::vector<CdfPoint> cdf_points(std::span<const double> values) {
  if (values.empty()) throw DataError("cdf of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> cdf;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    cdf.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

double cdf_fraction_at(std::span<const CdfPoint> cdf, double x) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), x,
                             [](double v, const CdfPoint& p) { return v < p.value; });
  if (it == cdf.begin()) return 0.0;
  return std::prev(it)->fraction;
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotSummary boxplot_summary(std::span<const double> values) {
  if (values.empty()) throw DataError("boxplot of an empty sample");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75), *hi};
}

EvalReport summarize(EvalReport report) {
  std::sort(report.per_machine.begin(), report.per_machine.end(),
            [](const MachineMetric& a, const MachineMetric& b) { return a.machine_id < b.machine_id; });
  std::vector<double> values;
  values.reserve(report.per_machine.size());
  for (const auto& m : report.per_machine) values.push_back(m.value);
  report.cdf = cdf_points(values);
  report.box = boxplot_summary(values);
  double sum = 0.0;
  for (double v : values) sum += v;
  report.mean = sum / static_cast<double>(values.size());
  return report;
}

}  // namespace hostload

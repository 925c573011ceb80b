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

// Error metrics and distribution summaries used for evaluation reports.

#ifndef HOSTLOAD_METRICS_HPP_
#define HOSTLOAD_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "hostload/esp.hpp"

namespace hostload {

// Mean segment squared error: (1/s) * sum_i s_i (l_i - L_i)^2 with s = sum_i s_i.
double msse(std::span<const double> predicted, std::span<const double> truth,
            const SegmentScheme& scheme);

// (1/N) * sum_i (predicted_i - truth_i)^2. Throws ShapeError on a length
// mismatch or empty input.
double mse(std::span<const double> predicted, std::span<const double> truth);

struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;  // share of inputs <= value

  bool operator==(const CdfPoint&) const = default;
};

// Empirical CDF evaluated at each distinct input value, ascending.
std::vector<CdfPoint> cdf_points(std::span<const double> values);

// Share of the underlying sample that is <= x, read off a cdf_points() result.
double cdf_fraction_at(std::span<const CdfPoint> cdf, double x);

struct BoxplotSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Linear interpolation between order statistics: position (N - 1) * p.
double quantile(std::span<const double> values, double p);

BoxplotSummary boxplot_summary(std::span<const double> values);

struct MachineMetric {
  std::string machine_id;
  double value = 0.0;
};

// One (model, task, prediction length) evaluation over a set of machines.
struct EvalReport {
  std::string model;
  std::string task;        // "actual" or "esp"
  std::size_t length = 0;  // steps m for actual, segment count n for esp
  std::size_t length_steps = 0;
  std::string metric;      // "mse" or "msse"
  std::vector<MachineMetric> per_machine;  // sorted by machine id
  std::vector<CdfPoint> cdf;
  BoxplotSummary box;
  double mean = 0.0;       // equal weight per machine
};

// Sorts per_machine by id and fills cdf, box and mean.
EvalReport summarize(EvalReport report);

}  // namespace hostload

#endif  // HOSTLOAD_METRICS_HPP_

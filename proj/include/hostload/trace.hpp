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

// Cluster-trace ingestion: usage records -> fixed-interval per-machine load
// series -> day-based splits -> (history, target) training windows.
//
// Simple trace schema, one record per line, comma or tab separated, optional
// header:
//
//   start_us, end_us, machine_id, cpu_usage[, memory_usage]
//
// The Google cluster-data task_usage table can be read directly with
// TraceFormat::kGoogleTaskUsage (columns 0, 1, 4, 5 and 6 are used).

#ifndef HOSTLOAD_TRACE_HPP_
#define HOSTLOAD_TRACE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hostload/scaler.hpp"

namespace hostload {

enum class Resource { kCpu, kMemory };
enum class TraceFormat { kSimple, kGoogleTaskUsage };

Resource parse_resource(const std::string& name);
const char* to_string(Resource r);

struct UsageRecord {
  std::int64_t start_us = 0;
  std::int64_t end_us = 0;
  std::string machine_id;
  double usage = 0.0;

  bool operator==(const UsageRecord&) const = default;
};

struct ParseOptions {
  Resource resource = Resource::kCpu;
  TraceFormat format = TraceFormat::kSimple;
  // Parsing fails when malformed / data lines exceeds this ratio.
  double max_malformed_ratio = 0.05;
};

struct ParseResult {
  std::vector<UsageRecord> records;
  std::size_t data_lines = 0;
  std::size_t malformed = 0;
};

// Throws DataError on an unreadable stream or too many malformed lines.
ParseResult parse_trace(std::istream& in, const ParseOptions& options = {});

struct MachineSeries {
  std::string machine_id;
  std::int64_t interval_seconds = 300;
  std::int64_t start_us = 0;
  std::vector<double> values;
};

// Explicit interval grid; when absent the grid spans the machine's records.
struct AggregationGrid {
  std::int64_t start_us = 0;
  std::size_t intervals = 0;
};

// Per interval, the sum over records of usage weighted by the fraction of the
// interval the record's [start, end) covers. Intervals no record touches take
// the previous interval's value (0 at the start). Throws DataError when no
// record belongs to machine_id.
MachineSeries aggregate(std::span<const UsageRecord> records, const std::string& machine_id,
                        std::int64_t interval_seconds = 300,
                        std::optional<AggregationGrid> grid = std::nullopt);

// Distinct machine ids, ascending.
std::vector<std::string> machine_ids(std::span<const UsageRecord> records);

// Seeded sample of `count` ids (all of them if count >= ids.size()), ascending.
std::vector<std::string> sample_machines(std::vector<std::string> ids, std::size_t count,
                                         std::uint64_t seed);

// Series cache files: "timestamp_us<TAB>value" per line after a header.
void write_series(std::ostream& out, const MachineSeries& series);
MachineSeries read_series(std::istream& in, const std::string& machine_id);

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

struct DatasetSplit {
  IndexRange train;
  IndexRange validation;
  IndexRange test;
};

struct DayBoundaries {
  std::size_t train_end = 20;
  std::size_t validation_end = 26;
  std::size_t test_end = 29;
};

// Train = days [1, 20], validation = (20, 26], test = (26, 29]. Points beyond
// the last boundary are ignored. Throws DataError when any split is empty or
// the series is shorter than test_end days.
DatasetSplit split_by_days(std::size_t series_length, std::size_t points_per_day,
                           DayBoundaries days = {});

std::size_t points_per_day(std::int64_t interval_seconds);

struct StandardizedSeries {
  std::vector<double> values;
  Scaler scaler;
};

// Scaler fitted on split.train only, applied to the whole series.
StandardizedSeries standardize(std::span<const double> values, const DatasetSplit& split);

enum class TaskKind { kActual, kEsp };

// actual:m predicts the next m values; esp:n predicts n segment means over
// the next baseline * 2^(n-1) steps.
struct TaskSpec {
  TaskKind kind = TaskKind::kActual;
  std::size_t size = 1;
  std::size_t baseline = 1;

  // "actual:6", "esp:4".
  static TaskSpec parse(const std::string& text);
  std::string to_string() const;
  std::string kind_name() const { return kind == TaskKind::kActual ? "actual" : "esp"; }
  std::size_t horizon_steps() const;
  std::size_t output_size() const { return size; }

  bool operator==(const TaskSpec&) const = default;
};

// Turns raw future values into the target representation of `task`.
std::vector<double> make_target(std::span<const double> future, const TaskSpec& task);

struct WindowPair {
  std::vector<double> history;
  std::vector<double> target;
  std::size_t target_begin = 0;  // series index of the first future value
};

// Stride-1 windows lying entirely inside `range`. Throws DataError when the
// range cannot hold one history plus one horizon.
std::vector<WindowPair> make_windows(std::span<const double> values, IndexRange range,
                                     std::size_t w_in, const TaskSpec& task);

}  // namespace hostload

#endif  // HOSTLOAD_TRACE_HPP_

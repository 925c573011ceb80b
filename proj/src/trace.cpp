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

#include "hostload/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string_view>

#include "hostload/errors.hpp"
#include "hostload/esp.hpp"

namespace hostload {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(delim, pos);
    fields.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<UsageRecord> parse_record(const std::vector<std::string_view>& f,
                                        const ParseOptions& options) {
  std::size_t start_col = 0, end_col = 1, machine_col = 2, usage_col = 3;
  if (options.format == TraceFormat::kGoogleTaskUsage) {
    machine_col = 4;
    usage_col = options.resource == Resource::kCpu ? 5 : 6;
  } else if (options.resource == Resource::kMemory) {
    usage_col = 4;
  }
  if (f.size() <= usage_col) return std::nullopt;
  const auto start = parse_number<std::int64_t>(f[start_col]);
  const auto end = parse_number<std::int64_t>(f[end_col]);
  const auto usage = parse_number<double>(f[usage_col]);
  if (!start || !end || !usage || f[machine_col].empty()) return std::nullopt;
  if (*end <= *start || !(*usage >= 0.0) || !std::isfinite(*usage)) return std::nullopt;
  return UsageRecord{*start, *end, std::string(f[machine_col]), *usage};
}

}  // namespace

Resource parse_resource(const std::string& name) {
  if (name == "cpu") return Resource::kCpu;
  if (name == "memory") return Resource::kMemory;
  throw UsageError("unknown resource '" + name + "' (expected cpu or memory)");
}

const char* to_string(Resource r) { return r == Resource::kCpu ? "cpu" : "memory"; }

ParseResult parse_trace(std::istream& in, const ParseOptions& options) {
  if (!in.good()) throw DataError("trace stream is not readable");
  ParseResult result;
  std::optional<char> delim;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!delim) delim = view.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto fields = split_fields(view, *delim);
    if (first) {
      first = false;
      if (!parse_number<std::int64_t>(fields.front())) continue;  // header
    }
    ++result.data_lines;
    if (auto rec = parse_record(fields, options)) {
      result.records.push_back(std::move(*rec));
    } else {
      ++result.malformed;
    }
  }
  if (in.bad()) throw DataError("I/O error while reading trace");
  if (result.data_lines > 0) {
    const double ratio =
        static_cast<double>(result.malformed) / static_cast<double>(result.data_lines);
    if (ratio > options.max_malformed_ratio) {
      throw DataError(std::to_string(result.malformed) + " of " +
                      std::to_string(result.data_lines) + " trace lines are malformed");
    }
  }
  return result;
}

MachineSeries aggregate(std::span<const UsageRecord> records, const std::string& machine_id,
                        std::int64_t interval_seconds, std::optional<AggregationGrid> grid) {
  if (interval_seconds <= 0) throw UsageError("interval must be positive");
  const std::int64_t width = interval_seconds * 1'000'000;

  std::vector<const UsageRecord*> mine;
  for (const auto& r : records) {
    if (r.machine_id == machine_id) mine.push_back(&r);
  }
  if (mine.empty()) throw DataError("no usage records for machine " + machine_id);

  if (!grid) {
    std::int64_t lo = mine.front()->start_us, hi = mine.front()->end_us;
    for (const auto* r : mine) {
      lo = std::min(lo, r->start_us);
      hi = std::max(hi, r->end_us);
    }
    const auto floor_div = [](std::int64_t a, std::int64_t b) {
      return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
    };
    const std::int64_t origin = floor_div(lo, width) * width;
    grid = AggregationGrid{origin, static_cast<std::size_t>((hi - origin + width - 1) / width)};
  }

  MachineSeries series;
  series.machine_id = machine_id;
  series.interval_seconds = interval_seconds;
  series.start_us = grid->start_us;
  series.values.assign(grid->intervals, 0.0);
  std::vector<bool> covered(grid->intervals, false);

  const std::int64_t grid_end = grid->start_us + static_cast<std::int64_t>(grid->intervals) * width;
  for (const auto* r : mine) {
    const std::int64_t s = std::max(r->start_us, grid->start_us);
    const std::int64_t e = std::min(r->end_us, grid_end);
    if (e <= s) continue;
    const auto first = static_cast<std::size_t>((s - grid->start_us) / width);
    const auto last = static_cast<std::size_t>((e - grid->start_us - 1) / width);
    for (std::size_t k = first; k <= last; ++k) {
      const std::int64_t lo = grid->start_us + static_cast<std::int64_t>(k) * width;
      const std::int64_t overlap = std::min(e, lo + width) - std::max(s, lo);
      series.values[k] += r->usage * static_cast<double>(overlap) / static_cast<double>(width);
      covered[k] = true;
    }
  }
  double last_value = 0.0;
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    if (covered[k]) {
      last_value = series.values[k];
    } else {
      series.values[k] = last_value;
    }
  }
  return series;
}

std::vector<std::string> machine_ids(std::span<const UsageRecord> records) {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.machine_id);
  return {ids.begin(), ids.end()};
}

std::vector<std::string> sample_machines(std::vector<std::string> ids, std::size_t count,
                                         std::uint64_t seed) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (count < ids.size()) {
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates with an explicit index draw so the sample does not
    // depend on the standard library's shuffle.
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (ids.size() - i));
      std::swap(ids[i], ids[j]);
    }
    ids.resize(count);
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

void write_series(std::ostream& out, const MachineSeries& series) {
  out << "timestamp_us\tvalue\n";
  char buf[64];
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    const std::int64_t ts =
        series.start_us + static_cast<std::int64_t>(k) * series.interval_seconds * 1'000'000;
    const auto res = std::to_chars(buf, buf + sizeof buf, series.values[k]);
    out << ts << '\t' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

MachineSeries read_series(std::istream& in, const std::string& machine_id) {
  if (!in.good()) throw DataError("series stream for " + machine_id + " is not readable");
  MachineSeries series;
  series.machine_id = machine_id;
  std::vector<std::int64_t> stamps;
  std::string line;
  std::optional<char> delim;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!delim) delim = view.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto fields = split_fields(view, *delim);
    const auto ts = parse_number<std::int64_t>(fields.front());
    if (!ts) {
      if (stamps.empty()) continue;  // header
      throw DataError("bad timestamp in series for " + machine_id);
    }
    if (fields.size() < 2) throw DataError("missing value in series for " + machine_id);
    const auto v = parse_number<double>(fields[1]);
    if (!v || !std::isfinite(*v) || *v < 0.0) {
      throw DataError("bad value in series for " + machine_id);
    }
    stamps.push_back(*ts);
    series.values.push_back(*v);
  }
  if (stamps.empty()) throw DataError("empty series for " + machine_id);
  series.start_us = stamps.front();
  if (stamps.size() > 1) {
    const std::int64_t step = stamps[1] - stamps[0];
    if (step <= 0 || step % 1'000'000 != 0) throw DataError("irregular series for " + machine_id);
    for (std::size_t k = 2; k < stamps.size(); ++k) {
      if (stamps[k] - stamps[k - 1] != step) throw DataError("irregular series for " + machine_id);
    }
    series.interval_seconds = step / 1'000'000;
  }
  return series;
}

DatasetSplit split_by_days(std::size_t series_length, std::size_t points_per_day,
                           DayBoundaries days) {
  if (points_per_day == 0) throw UsageError("points per day must be >= 1");
  if (!(days.train_end < days.validation_end && days.validation_end < days.test_end) ||
      days.train_end == 0) {
    throw UsageError("day boundaries must be strictly increasing");
  }
  const std::size_t train_end = days.train_end * points_per_day;
  const std::size_t val_end = std::min(days.validation_end * points_per_day, series_length);
  const std::size_t test_end = std::min(days.test_end * points_per_day, series_length);
  if (series_length <= train_end || test_end <= val_end) {
    throw DataError("series of " + std::to_string(series_length) + " points is too short for a " +
                    std::to_string(days.test_end) + "-day split at " +
                    std::to_string(points_per_day) + " points per day");
  }
  if (series_length < days.test_end * points_per_day) {
    throw DataError("series of " + std::to_string(series_length) + " points covers fewer than " +
                    std::to_string(days.test_end) + " days");
  }
  return {{0, train_end}, {train_end, val_end}, {val_end, test_end}};
}

std::size_t points_per_day(std::int64_t interval_seconds) {
  if (interval_seconds <= 0 || 86400 % interval_seconds != 0) {
    throw UsageError("interval must divide one day");
  }
  return static_cast<std::size_t>(86400 / interval_seconds);
}

StandardizedSeries standardize(std::span<const double> values, const DatasetSplit& split) {
  if (split.train.end > values.size() || split.train.size() == 0) {
    throw DataError("training range is empty or outside the series");
  }
  const Scaler scaler = Scaler::fit(values.subspan(split.train.begin, split.train.size()));
  return {scaler.apply(values), scaler};
}

TaskSpec TaskSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("task must look like actual:m or esp:n");
  const std::string kind = text.substr(0, colon);
  const auto size = parse_number<std::size_t>(std::string_view(text).substr(colon + 1));
  if (!size || *size == 0) throw UsageError("task size must be a positive integer: " + text);
  TaskSpec spec;
  if (kind == "actual") {
    spec.kind = TaskKind::kActual;
  } else if (kind == "esp") {
    spec.kind = TaskKind::kEsp;
    make_scheme(*size);  // validates n
  } else {
    throw UsageError("unknown task kind '" + kind + "'");
  }
  spec.size = *size;
  return spec;
}

std::string TaskSpec::to_string() const { return kind_name() + ":" + std::to_string(size); }

std::size_t TaskSpec::horizon_steps() const {
  return kind == TaskKind::kActual ? size : make_scheme(size, baseline).total;
}

std::vector<double> make_target(std::span<const double> future, const TaskSpec& task) {
  if (task.kind == TaskKind::kActual) {
    if (future.size() < task.size) throw DataError("not enough future values for the target");
    return {future.begin(), future.begin() + static_cast<std::ptrdiff_t>(task.size)};
  }
  return esp_transform(future, make_scheme(task.size, task.baseline));
}

std::vector<WindowPair> make_windows(std::span<const double> values, IndexRange range,
                                     std::size_t w_in, const TaskSpec& task) {
  if (w_in == 0) throw UsageError("history window must be >= 1");
  if (range.end > values.size() || range.begin > range.end) {
    throw DataError("window range outside the series");
  }
  const std::size_t horizon = task.horizon_steps();
  if (range.size() < w_in + horizon) {
    throw DataError("range of " + std::to_string(range.size()) + " points cannot hold a " +
                    std::to_string(w_in) + "-step history and " + std::to_string(horizon) +
                    "-step horizon");
  }
  std::vector<WindowPair> windows;
  const std::size_t count = range.size() - w_in - horizon + 1;
  windows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t h0 = range.begin + k;
    WindowPair w;
    w.history.assign(values.begin() + static_cast<std::ptrdiff_t>(h0),
                     values.begin() + static_cast<std::ptrdiff_t>(h0 + w_in));
    w.target_begin = h0 + w_in;
    w.target = make_target(values.subspan(w.target_begin, horizon), task);
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace hostload

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

// Multi-machine glue between the cached series, the models and the reports:
// pooled training windows, per-machine test evaluation, report files.

#ifndef HOSTLOAD_PIPELINE_HPP_
#define HOSTLOAD_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hostload/baselines.hpp"
#include "hostload/metrics.hpp"
#include "hostload/model_io.hpp"
#include "hostload/trace.hpp"

namespace hostload {

struct MachineData {
  MachineSeries series;
  DatasetSplit split;
};

struct SeriesSet {
  std::vector<MachineData> machines;  // ascending machine id
  std::size_t points_per_day = 288;
  std::uint64_t sample_seed = 0;
};

inline constexpr const char* kManifestName = "manifest.tsv";

std::string series_file_name(const std::string& machine_id);

struct Manifest {
  std::string resource;
  std::int64_t interval_seconds = 300;
  std::uint64_t seed = 0;
  std::size_t requested = 0;
  std::vector<std::string> machine_ids;
};

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& dir);

// Loads every machine listed in the manifest and splits it by day.
// points_per_day defaults to one day at the series' interval.
SeriesSet load_series_dir(const std::filesystem::path& dir,
                          std::optional<std::size_t> points_per_day = std::nullopt);

// Scaler over the concatenated training ranges of all machines.
Scaler pooled_scaler(const SeriesSet& set);

struct PooledWindows {
  std::vector<WindowPair> train;
  std::vector<WindowPair> validation;
};

// Standardized windows from every machine's train and validation ranges.
PooledWindows pooled_windows(const SeriesSet& set, const Scaler& scaler, std::size_t w_in,
                             const TaskSpec& task);

// Maps a raw (original-unit) history to a forecast in the task's target
// representation, original units.
using Predictor = std::function<std::vector<double>(std::span<const double> raw_history)>;
using PredictorFactory = std::function<Predictor(const MachineData&)>;

PredictorFactory network_predictor(const ModelFile& file);
// Fits AR(order) per machine on its standardized training range.
PredictorFactory ar_predictor(std::size_t order, const TaskSpec& task);

// Mean over the machine's test windows of MSE (actual) or MSSE (esp).
double evaluate_machine(const MachineData& machine, const Predictor& predictor, std::size_t w_in,
                        const TaskSpec& task);

EvalReport evaluate(const SeriesSet& set, const PredictorFactory& factory,
                    const std::string& model_name, std::size_t w_in, const TaskSpec& task);

std::string report_stem(const EvalReport& report);

// <stem>_machines.tsv, <stem>_cdf.tsv and <stem>_box.tsv.
void write_report_files(const std::filesystem::path& dir, const EvalReport& report);

// Threshold used for the "share of machines with metric <= x" summary column.
inline constexpr double kCdfReadout = 0.025;

void write_summary(const std::filesystem::path& path, std::span<const EvalReport> reports,
                   std::int64_t interval_seconds);

}  // namespace hostload

#endif  // HOSTLOAD_PIPELINE_HPP_

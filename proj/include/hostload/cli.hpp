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

// Command implementations behind the `hostload` executable.

#ifndef HOSTLOAD_CLI_HPP_
#define HOSTLOAD_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hostload/metrics.hpp"
#include "hostload/trace.hpp"
#include "hostload/training.hpp"

namespace hostload::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // unexpected I/O or internal error
  kUsageError = 2,
  kDataError = 3,
  kDivergence = 4,
};

// Resolved settings, written to <out>/run_config.txt as key=value lines.
using ResolvedConfig = std::vector<std::pair<std::string, std::string>>;

void write_run_config(const std::filesystem::path& dir, const std::string& command,
                      const ResolvedConfig& config);

// Flat key=value file: '#' comments and blank lines ignored, keys are long
// flag names without the leading dashes.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

struct IngestOptions {
  std::filesystem::path trace;
  Resource resource = Resource::kCpu;
  TraceFormat format = TraceFormat::kSimple;
  std::size_t machines = 1000;
  std::uint64_t seed = 1;
  std::int64_t interval_seconds = 300;
  double max_malformed_ratio = 0.05;
  std::filesystem::path out;
};

struct IngestSummary {
  std::vector<std::string> machine_ids;
  std::size_t records = 0;
  std::size_t malformed = 0;
  bool sample_truncated = false;  // fewer machines than requested
};

IngestSummary cmd_ingest(const IngestOptions& options, std::ostream& log);

struct TrainOptions {
  std::filesystem::path series_dir;
  std::string model = "bilstm";
  TaskSpec task;
  std::string fusion = "concat";
  std::optional<std::size_t> window;
  std::optional<std::size_t> truncated_length;
  std::size_t hidden_size = 128;
  std::optional<std::size_t> fc_size;  // defaults to hidden_size
  std::size_t batch_size = 128;
  std::size_t epochs = 90;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double anneal_factor = 0.1;
  int anneal_every = 30;
  double clip_norm = 5.0;
  double dropout = 0.01;
  std::size_t patience = 10;
  std::uint64_t seed = 1;
  std::optional<std::size_t> points_per_day;
  std::filesystem::path out;
  std::optional<std::filesystem::path> model_file;
};

struct TrainSummary {
  std::filesystem::path model_file;
  TrainState state;
  ResolvedConfig resolved;
};

TrainConfig resolve_train_config(const TrainOptions& options);
TrainSummary cmd_train(const TrainOptions& options, std::ostream& log);

struct EvaluateOptions {
  std::filesystem::path series_dir;
  std::vector<std::filesystem::path> model_files;
  std::string model;                 // "ar" to evaluate the AR baseline
  std::vector<TaskSpec> tasks;       // required for ar; checked against model files
  std::size_t ar_order = 16;
  std::optional<std::size_t> window; // history length for ar
  std::optional<std::size_t> points_per_day;
  std::filesystem::path out;
};

std::vector<EvalReport> cmd_evaluate(const EvaluateOptions& options, std::ostream& log);

struct PredictOptions {
  std::filesystem::path model_file;
  std::filesystem::path series;
  std::size_t index = 0;
  std::optional<std::size_t> horizon;
  std::filesystem::path out;
};

struct PredictRow {
  std::size_t step = 0;
  double predicted = 0.0;
  double actual = 0.0;
};

std::vector<PredictRow> cmd_predict(const PredictOptions& options, std::ostream& log);

// "actual:6,12,18" -> three TaskSpecs.
std::vector<TaskSpec> parse_task_list(const std::string& text);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hostload::cli

#endif  // HOSTLOAD_CLI_HPP_

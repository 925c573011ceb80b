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

#include "hostload/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "hostload/baselines.hpp"
#include "hostload/bilstm.hpp"
#include "hostload/errors.hpp"
#include "hostload/format.hpp"
#include "hostload/model_io.hpp"
#include "hostload/pipeline.hpp"

namespace hostload::cli {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory " + dir.string());
}

std::string task_list_string(const std::vector<TaskSpec>& tasks) {
  std::string s;
  for (const auto& t : tasks) s += (s.empty() ? "" : ",") + t.to_string();
  return s;
}

}  // namespace

void write_run_config(const fs::path& dir, const std::string& command, const ResolvedConfig& config) {
  std::ofstream out(dir / "run_config.txt", std::ios::trunc);
  if (!out) throw DataError("cannot write " + (dir / "run_config.txt").string());
  out << "# resolved settings for `hostload " << command << "`\n";
  for (const auto& [k, v] : config) out << k << '=' << v << '\n';
}

std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

std::vector<TaskSpec> parse_task_list(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("task must look like actual:6,12 or esp:4,5");
  const std::string kind = text.substr(0, colon);
  std::vector<TaskSpec> tasks;
  std::size_t pos = colon + 1;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    tasks.push_back(TaskSpec::parse(kind + ":" + item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return tasks;
}

IngestSummary cmd_ingest(const IngestOptions& options, std::ostream& log) {
  if (options.machines == 0) throw UsageError("--machines must be >= 1");
  std::ifstream in(options.trace);
  if (!in) throw DataError("cannot open trace file " + options.trace.string());
  const ParseResult parsed =
      parse_trace(in, {options.resource, options.format, options.max_malformed_ratio});
  if (parsed.records.empty()) throw DataError("trace " + options.trace.string() + " has no usage records");

  IngestSummary summary;
  summary.records = parsed.records.size();
  summary.malformed = parsed.malformed;
  const std::vector<std::string> all = machine_ids(parsed.records);
  if (options.machines > all.size()) {
    summary.sample_truncated = true;
    log << "warning: requested " << options.machines << " machines but the trace has " << all.size()
        << "; using all of them\n";
  }
  summary.machine_ids = sample_machines(all, options.machines, options.seed);

  // One grid for every machine so day boundaries line up.
  const std::int64_t width = options.interval_seconds * 1'000'000;
  std::int64_t lo = parsed.records.front().start_us, hi = parsed.records.front().end_us;
  for (const auto& r : parsed.records) {
    lo = std::min(lo, r.start_us);
    hi = std::max(hi, r.end_us);
  }
  const std::int64_t origin = (lo >= 0 ? lo / width : (lo - width + 1) / width) * width;
  const AggregationGrid grid{origin, static_cast<std::size_t>((hi - origin + width - 1) / width)};

  ensure_dir(options.out);
  for (const auto& id : summary.machine_ids) {
    const MachineSeries series = aggregate(parsed.records, id, options.interval_seconds, grid);
    std::ofstream out(options.out / series_file_name(id), std::ios::trunc);
    if (!out) throw DataError("cannot write series cache for " + id);
    write_series(out, series);
  }
  write_manifest(options.out, {to_string(options.resource), options.interval_seconds, options.seed,
                               options.machines, summary.machine_ids});
  write_run_config(options.out, "ingest",
                   {{"trace", options.trace.string()},
                    {"resource", to_string(options.resource)},
                    {"format", options.format == TraceFormat::kSimple ? "simple" : "google"},
                    {"machines", std::to_string(options.machines)},
                    {"seed", std::to_string(options.seed)},
                    {"interval", std::to_string(options.interval_seconds)},
                    {"max-malformed", format_double(options.max_malformed_ratio)},
                    {"out", options.out.string()}});
  log << "ingested " << summary.records << " records (" << summary.malformed << " malformed), "
      << summary.machine_ids.size() << " machines -> " << options.out.string() << '\n';
  return summary;
}

TrainConfig resolve_train_config(const TrainOptions& o) {
  TrainConfig c = TrainConfig::for_task(o.task);
  if (o.window) c.input_window = *o.window;
  if (o.truncated_length) c.truncated_length = *o.truncated_length;
  c.hidden_size = o.hidden_size;
  c.fc_size = o.fc_size.value_or(o.hidden_size);
  c.batch_size = o.batch_size;
  c.max_epochs = o.epochs;
  c.sgd = {o.learning_rate, o.anneal_factor, o.anneal_every, o.momentum};
  c.clip_norm = o.clip_norm;
  c.dropout_rate = o.dropout;
  c.early_stop_patience = o.patience;
  c.rng_seed = o.seed;
  c.validate();
  return c;
}

TrainSummary cmd_train(const TrainOptions& o, std::ostream& log) {
  const ModelKind kind = parse_model_kind(o.model);
  if (kind == ModelKind::kAr) {
    throw UsageError("the ar baseline is fitted per machine at evaluation time; use `evaluate --model ar`");
  }
  const TrainConfig config = resolve_train_config(o);
  const Fusion fusion = parse_fusion(o.fusion);
  const SeriesSet set = load_series_dir(o.series_dir, o.points_per_day);
  const Scaler scaler = pooled_scaler(set);
  const PooledWindows windows = pooled_windows(set, scaler, config.input_window, o.task);

  const Architecture arch = kind == ModelKind::kBiLstm ? Architecture::kBiLstm : Architecture::kLstm;
  const ModelDims dims{1, config.hidden_size, config.input_window, config.fc_size, o.task.output_size()};
  BiLstmModel model = BiLstmModel::create(arch, dims, config.rng_seed, fusion);

  ensure_dir(o.out);
  const std::string stem = o.model + "_" + o.task.kind_name() + "_" + std::to_string(o.task.size);
  std::ofstream train_log(o.out / (stem + "_train_log.tsv"), std::ios::trunc);
  if (!train_log) throw DataError("cannot write training log in " + o.out.string());
  write_epoch_log_header(train_log);
  TrainResult result = train(std::move(model), windows.train, windows.validation, config,
                             [&](const EpochRecord& r) {
                               write_epoch_log_line(train_log, r);
                               train_log.flush();
                             });

  TrainSummary summary;
  summary.state = result.state;
  summary.model_file = o.model_file.value_or(o.out / (stem + ".model"));
  summary.resolved = {{"series", o.series_dir.string()},
                      {"model", o.model},
                      {"task", o.task.to_string()},
                      {"fusion", o.fusion},
                      {"window", std::to_string(config.input_window)},
                      {"hidden", std::to_string(config.hidden_size)},
                      {"fc", std::to_string(config.fc_size)},
                      {"batch", std::to_string(config.batch_size)},
                      {"epochs", std::to_string(config.max_epochs)},
                      {"lr", format_double(config.sgd.learning_rate)},
                      {"momentum", format_double(config.sgd.momentum)},
                      {"anneal-factor", format_double(config.sgd.anneal_factor)},
                      {"anneal-every", std::to_string(config.sgd.anneal_every)},
                      {"clip", format_double(config.clip_norm)},
                      {"truncation", std::to_string(config.truncated_length)},
                      {"dropout", format_double(config.dropout_rate)},
                      {"patience", std::to_string(config.early_stop_patience)},
                      {"seed", std::to_string(config.rng_seed)},
                      {"points-per-day", std::to_string(set.points_per_day)},
                      {"out", o.out.string()},
                      {"model-file", summary.model_file.string()}};

  ModelFile file{result.model, scaler, o.task, {}};
  for (const auto& [k, v] : summary.resolved) {
    if (k != "series" && k != "out" && k != "model-file" && k != "task" && k != "fusion") {
      file.metadata.emplace_back("train." + k, v);
    }
  }
  file.metadata.emplace_back("train.best_epoch", std::to_string(result.state.best_epoch));
  file.metadata.emplace_back("train.best_validation_loss",
                             format_double(result.state.best_validation_loss));
  save_model(summary.model_file, file);
  write_run_config(o.out, "train", summary.resolved);
  log << "trained " << o.model << " for " << result.state.history.size() << " epochs (best epoch "
      << result.state.best_epoch << ", validation loss "
      << format_double(result.state.best_validation_loss) << ") -> " << summary.model_file.string()
      << '\n';
  return summary;
}

std::vector<EvalReport> cmd_evaluate(const EvaluateOptions& o, std::ostream& log) {
  const SeriesSet set = load_series_dir(o.series_dir, o.points_per_day);
  const std::int64_t interval = set.machines.front().series.interval_seconds;

  struct Job {
    std::string name;
    TaskSpec task;
    std::size_t window;
    PredictorFactory factory;
  };
  std::vector<Job> jobs;

  if (o.model == "ar") {
    if (!o.model_files.empty()) throw UsageError("--model ar does not take --model-file");
    if (o.tasks.empty()) throw UsageError("--model ar needs --task");
    for (const auto& t : o.tasks) {
      const std::size_t w = o.window.value_or(TrainConfig::for_task(t).input_window);
      if (w < o.ar_order) throw UsageError("--window must be >= --ar-order");
      jobs.push_back({"ar", t, w, ar_predictor(o.ar_order, t)});
    }
  } else {
    if (o.model_files.empty()) throw UsageError("evaluate needs --model-file (or --model ar)");
    std::vector<TaskSpec> seen;
    for (const auto& path : o.model_files) {
      const ModelFile file = load_model(path);
      const std::string name = to_string(file.model.architecture);
      if (!o.model.empty() && o.model != name) {
        throw UsageError("model file " + path.string() + " holds a " + name + ", not " + o.model);
      }
      seen.push_back(file.task);
      jobs.push_back({name, file.task, file.model.dims.window, network_predictor(file)});
    }
    if (!o.tasks.empty()) {
      std::multiset<std::string> want, have;
      for (const auto& t : o.tasks) want.insert(t.to_string());
      for (const auto& t : seen) have.insert(t.to_string());
      if (want != have) {
        throw UsageError("requested horizons " + task_list_string(o.tasks) +
                         " do not match the model outputs " + task_list_string(seen));
      }
    }
  }

  ensure_dir(o.out);
  std::vector<EvalReport> reports;
  std::ofstream timing(o.out / "timing.tsv", std::ios::trunc);
  timing << "model\ttask\tlength\tseconds\n";
  for (const auto& job : jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    EvalReport report = evaluate(set, job.factory, job.name, job.window, job.task);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_report_files(o.out, report);
    timing << report.model << '\t' << report.task << '\t' << report.length << '\t'
           << format_fixed(seconds, 3) << '\n';
    log << report_stem(report) << ": mean " << report.metric << ' ' << format_double(report.mean)
        << " over " << report.per_machine.size() << " machines\n";
    reports.push_back(std::move(report));
  }
  write_summary(o.out / "summary.tsv", reports, interval);

  ResolvedConfig resolved{{"series", o.series_dir.string()},
                          {"model", o.model.empty() ? jobs.front().name : o.model}};
  for (const auto& p : o.model_files) resolved.emplace_back("model-file", p.string());
  std::vector<TaskSpec> tasks;
  for (const auto& j : jobs) tasks.push_back(j.task);
  resolved.emplace_back("task", task_list_string(tasks));
  if (o.model == "ar") resolved.emplace_back("ar-order", std::to_string(o.ar_order));
  resolved.emplace_back("points-per-day", std::to_string(set.points_per_day));
  resolved.emplace_back("out", o.out.string());
  write_run_config(o.out, "evaluate", resolved);
  return reports;
}

std::vector<PredictRow> cmd_predict(const PredictOptions& o, std::ostream& log) {
  const ModelFile file = load_model(o.model_file);
  const std::size_t w = file.model.dims.window;
  if (o.horizon && *o.horizon != file.task.size) {
    throw UsageError("--horizon " + std::to_string(*o.horizon) + " does not match the model task " +
                     file.task.to_string());
  }
  std::ifstream in(o.series);
  if (!in) throw DataError("cannot open series " + o.series.string());
  const MachineSeries series = read_series(in, o.series.stem().string());
  const auto& v = series.values;
  if (o.index < w) {
    throw UsageError("--index " + std::to_string(o.index) + " leaves fewer than " + std::to_string(w) +
                     " history values");
  }
  const std::size_t horizon = file.task.horizon_steps();
  if (o.index + horizon > v.size()) {
    throw UsageError("--index " + std::to_string(o.index) + " plus horizon " + std::to_string(horizon) +
                     " runs past the series end (" + std::to_string(v.size()) + " values)");
  }
  const std::span<const double> raw(v.data() + o.index - w, w);
  const Vector predicted = predict(file.model, file.scaler.apply(raw), file.scaler);
  const std::vector<double> actual =
      make_target(std::span<const double>(v.data() + o.index, horizon), file.task);

  std::vector<PredictRow> rows;
  for (std::size_t k = 0; k < predicted.size(); ++k) rows.push_back({k + 1, predicted[k], actual[k]});

  const fs::path out_file = fs::is_directory(o.out) || o.out.extension().empty()
                                ? o.out / ("prediction_" + o.series.stem().string() + "_" +
                                           std::to_string(o.index) + ".tsv")
                                : o.out;
  if (out_file.has_parent_path()) ensure_dir(out_file.parent_path());
  std::ofstream out(out_file, std::ios::trunc);
  if (!out) throw DataError("cannot write " + out_file.string());
  out << (file.task.kind == TaskKind::kActual ? "step" : "segment") << "\tpredicted\tactual\n";
  for (const auto& r : rows) {
    out << r.step << '\t' << format_double(r.predicted) << '\t' << format_double(r.actual) << '\n';
  }
  log << "wrote " << rows.size() << " rows -> " << out_file.string() << '\n';
  return rows;
}

namespace {

// Applies config-file entries to options the command line left unset.
void apply_config_file(CLI::App& sub, const fs::path& path) {
  for (const auto& [key, value] : read_config_file(path)) {
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw UsageError("config file " + path.string() + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Host load forecasting with BiLSTM, LSTM and AR models", "hostload"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const char* const kOutEnv = "HOSTLOAD_OUT_DIR";
  std::map<CLI::App*, std::string> config_paths;
  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_paths[sub], "key=value file; flags take precedence");
  };

  IngestOptions ingest;
  std::string ingest_resource = "cpu", ingest_format = "simple";
  auto* ing = app.add_subcommand("ingest", "Aggregate a usage trace into per-machine series caches");
  ing->add_option("--trace", ingest.trace, "Usage trace (comma or tab separated)")->required();
  ing->add_option("--resource", ingest_resource, "cpu or memory")->capture_default_str();
  ing->add_option("--format", ingest_format, "simple or google (task_usage table)")->capture_default_str();
  ing->add_option("--machines", ingest.machines, "Machines to sample")->capture_default_str();
  ing->add_option("--seed", ingest.seed, "Sampling seed")->capture_default_str();
  ing->add_option("--interval", ingest.interval_seconds, "Sampling interval in seconds")->capture_default_str();
  ing->add_option("--max-malformed", ingest.max_malformed_ratio, "Tolerated malformed-line ratio")
      ->capture_default_str();
  ing->add_option("--out", ingest.out, "Output directory")->envname(kOutEnv)->required();
  add_config(ing);

  TrainOptions tr;
  std::string train_task;
  auto* trn = app.add_subcommand("train", "Train an lstm or bilstm model on ingested series");
  trn->add_option("--series", tr.series_dir, "Directory written by ingest")->required();
  trn->add_option("--model", tr.model, "bilstm or lstm")->capture_default_str();
  trn->add_option("--task", train_task, "actual:m or esp:n")->required();
  trn->add_option("--fusion", tr.fusion, "concat or sum")->capture_default_str();
  trn->add_option("--window", tr.window, "History length (default 64 actual, 24 esp)");
  trn->add_option("--truncation", tr.truncated_length, "Truncated BPTT length (default 36 actual, 39 esp)");
  trn->add_option("--hidden", tr.hidden_size, "LSTM hidden units")->capture_default_str();
  trn->add_option("--fc", tr.fc_size, "FC width (default: hidden)");
  trn->add_option("--batch", tr.batch_size)->capture_default_str();
  trn->add_option("--epochs", tr.epochs)->capture_default_str();
  trn->add_option("--lr", tr.learning_rate)->capture_default_str();
  trn->add_option("--momentum", tr.momentum)->capture_default_str();
  trn->add_option("--anneal-factor", tr.anneal_factor)->capture_default_str();
  trn->add_option("--anneal-every", tr.anneal_every, "Epochs between drops; 0 disables")->capture_default_str();
  trn->add_option("--clip", tr.clip_norm, "Global gradient norm limit")->capture_default_str();
  trn->add_option("--dropout", tr.dropout)->capture_default_str();
  trn->add_option("--patience", tr.patience, "Early-stop patience in epochs")->capture_default_str();
  trn->add_option("--seed", tr.seed)->capture_default_str();
  trn->add_option("--points-per-day", tr.points_per_day, "Override the day length used for splits");
  trn->add_option("--model-file", tr.model_file, "Where to write the model");
  trn->add_option("--out", tr.out, "Output directory")->envname(kOutEnv)->required();
  add_config(trn);

  EvaluateOptions ev;
  std::string eval_tasks;
  auto* evl = app.add_subcommand("evaluate", "Score models on the test days of every machine");
  evl->add_option("--series", ev.series_dir, "Directory written by ingest")->required();
  evl->add_option("--model-file", ev.model_files, "Trained model (repeatable)");
  evl->add_option("--model", ev.model, "ar, lstm or bilstm");
  evl->add_option("--task", eval_tasks, "actual:6,12,... or esp:4,5,...");
  evl->add_option("--ar-order", ev.ar_order)->capture_default_str();
  evl->add_option("--window", ev.window, "History length for ar");
  evl->add_option("--points-per-day", ev.points_per_day);
  evl->add_option("--out", ev.out, "Output directory")->envname(kOutEnv)->required();
  add_config(evl);

  PredictOptions pr;
  auto* prd = app.add_subcommand("predict", "Write predicted vs actual values at one position");
  prd->add_option("--model-file", pr.model_file)->required();
  prd->add_option("--series", pr.series, "Series cache file")->required();
  prd->add_option("--index", pr.index, "First predicted position")->required();
  prd->add_option("--horizon", pr.horizon, "Must match the model's task size");
  prd->add_option("--out", pr.out, "Output file or directory")->envname(kOutEnv)->required();
  add_config(prd);

  try {
    // Required flags may come from the config file, so parse leniently first.
    std::vector<std::pair<CLI::App*, CLI::Option*>> required;
    for (auto* sub : {ing, trn, evl, prd}) {
      for (auto* opt : sub->get_options()) {
        if (opt->get_required()) {
          required.emplace_back(sub, opt);
          opt->required(false);
        }
      }
    }
    app.parse(argc, argv);
    for (auto* sub : {ing, trn, evl, prd}) {
      if (sub->parsed() && !config_paths[sub].empty()) apply_config_file(*sub, config_paths[sub]);
    }
    for (auto [sub, opt] : required) {
      if (sub->parsed() && opt->count() == 0) {
        throw CLI::RequiredError(opt->get_name());
      }
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (ing->parsed()) {
      ingest.resource = parse_resource(ingest_resource);
      if (ingest_format == "simple") {
        ingest.format = TraceFormat::kSimple;
      } else if (ingest_format == "google") {
        ingest.format = TraceFormat::kGoogleTaskUsage;
      } else {
        throw UsageError("unknown --format '" + ingest_format + "'");
      }
      cmd_ingest(ingest, out);
    } else if (trn->parsed()) {
      tr.task = TaskSpec::parse(train_task);
      cmd_train(tr, out);
    } else if (evl->parsed()) {
      if (!eval_tasks.empty()) ev.tasks = parse_task_list(eval_tasks);
      cmd_evaluate(ev, out);
    } else if (prd->parsed()) {
      cmd_predict(pr, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DivergenceError& e) {
    err << "training diverged: " << e.what() << '\n';
    return kDivergence;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const ShapeError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace hostload::cli

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

#include "hostload/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "hostload/bilstm.hpp"
#include "hostload/errors.hpp"
#include "hostload/format.hpp"

namespace hostload {

namespace fs = std::filesystem;

std::string series_file_name(const std::string& machine_id) {
  std::string safe = machine_id;
  for (char& c : safe) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return "series_" + safe + ".tsv";
}

void write_manifest(const fs::path& dir, const Manifest& manifest) {
  std::ofstream out(dir / kManifestName, std::ios::trunc);
  if (!out) throw DataError("cannot write " + (dir / kManifestName).string());
  out << "# resource=" << manifest.resource << '\n'
      << "# interval_seconds=" << manifest.interval_seconds << '\n'
      << "# seed=" << manifest.seed << '\n'
      << "# requested=" << manifest.requested << '\n'
      << "machine_id\tseries_file\n";
  for (const auto& id : manifest.machine_ids) out << id << '\t' << series_file_name(id) << '\n';
}

Manifest read_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in) throw DataError("cannot open " + (dir / kManifestName).string());
  Manifest m;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
      try {
        if (key == "resource") m.resource = value;
        if (key == "interval_seconds") m.interval_seconds = std::stoll(value);
        if (key == "seed") m.seed = std::stoull(value);
        if (key == "requested") m.requested = std::stoull(value);
      } catch (const std::exception&) {
        throw DataError("manifest: bad value for " + key);
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    m.machine_ids.push_back(line.substr(0, line.find('\t')));
  }
  if (m.machine_ids.empty()) throw DataError("manifest lists no machines");
  return m;
}

SeriesSet load_series_dir(const fs::path& dir, std::optional<std::size_t> points_per_day_override) {
  const Manifest manifest = read_manifest(dir);
  SeriesSet set;
  set.sample_seed = manifest.seed;
  std::vector<std::string> ids = manifest.machine_ids;
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    const fs::path path = dir / series_file_name(id);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open series cache " + path.string());
    MachineData md;
    md.series = read_series(in, id);
    set.points_per_day = points_per_day_override ? *points_per_day_override
                                                 : points_per_day(md.series.interval_seconds);
    md.split = split_by_days(md.series.values.size(), set.points_per_day);
    set.machines.push_back(std::move(md));
  }
  return set;
}

Scaler pooled_scaler(const SeriesSet& set) {
  std::vector<double> train;
  for (const auto& m : set.machines) {
    const auto& v = m.series.values;
    train.insert(train.end(), v.begin() + static_cast<std::ptrdiff_t>(m.split.train.begin),
                 v.begin() + static_cast<std::ptrdiff_t>(m.split.train.end));
  }
  return Scaler::fit(train);
}

PooledWindows pooled_windows(const SeriesSet& set, const Scaler& scaler, std::size_t w_in,
                             const TaskSpec& task) {
  PooledWindows out;
  for (const auto& m : set.machines) {
    const std::vector<double> z = scaler.apply(m.series.values);
    auto train = make_windows(z, m.split.train, w_in, task);
    auto val = make_windows(z, m.split.validation, w_in, task);
    std::move(train.begin(), train.end(), std::back_inserter(out.train));
    std::move(val.begin(), val.end(), std::back_inserter(out.validation));
  }
  return out;
}

PredictorFactory network_predictor(const ModelFile& file) {
  auto shared = std::make_shared<const ModelFile>(file);
  return [shared](const MachineData&) -> Predictor {
    return [shared](std::span<const double> raw_history) {
      const std::vector<double> z = shared->scaler.apply(raw_history);
      return predict(shared->model, z, shared->scaler);
    };
  };
}

PredictorFactory ar_predictor(std::size_t order, const TaskSpec& task) {
  return [order, task](const MachineData& machine) -> Predictor {
    const auto& v = machine.series.values;
    const std::span<const double> train(v.data() + machine.split.train.begin,
                                        machine.split.train.size());
    const Scaler scaler = Scaler::fit(train);
    const ArModel model = ar_fit(scaler.apply(train), order);
    return [scaler, model, task](std::span<const double> raw_history) {
      std::vector<double> z = ar_predict(model, scaler.apply(raw_history), task.horizon_steps());
      for (double& x : z) x = std::max(0.0, scaler.invert(x));
      return make_target(z, task);
    };
  };
}

double evaluate_machine(const MachineData& machine, const Predictor& predictor, std::size_t w_in,
                        const TaskSpec& task) {
  const auto windows = make_windows(machine.series.values, machine.split.test, w_in, task);
  const SegmentScheme scheme =
      task.kind == TaskKind::kEsp ? make_scheme(task.size, task.baseline) : SegmentScheme{};
  double total = 0.0;
  for (const auto& w : windows) {
    const std::vector<double> pred = predictor(w.history);
    total += task.kind == TaskKind::kActual ? mse(pred, w.target) : msse(pred, w.target, scheme);
  }
  return total / static_cast<double>(windows.size());
}

EvalReport evaluate(const SeriesSet& set, const PredictorFactory& factory,
                    const std::string& model_name, std::size_t w_in, const TaskSpec& task) {
  if (set.machines.empty()) throw DataError("no machines to evaluate");
  EvalReport report;
  report.model = model_name;
  report.task = task.kind_name();
  report.length = task.size;
  report.length_steps = task.horizon_steps();
  report.metric = task.kind == TaskKind::kActual ? "mse" : "msse";
  for (const auto& m : set.machines) {
    const Predictor p = factory(m);
    report.per_machine.push_back({m.series.machine_id, evaluate_machine(m, p, w_in, task)});
  }
  return summarize(std::move(report));
}

std::string report_stem(const EvalReport& r) {
  return r.model + "_" + r.task + "_" + std::to_string(r.length);
}

void write_report_files(const fs::path& dir, const EvalReport& report) {
  const std::string stem = report_stem(report);
  const auto open = [&](const std::string& suffix) {
    std::ofstream out(dir / (stem + suffix), std::ios::trunc);
    if (!out) throw DataError("cannot write " + (dir / (stem + suffix)).string());
    return out;
  };
  {
    auto out = open("_machines.tsv");
    out << "machine_id\t" << report.metric << '\n';
    for (const auto& m : report.per_machine) out << m.machine_id << '\t' << format_double(m.value) << '\n';
  }
  {
    auto out = open("_cdf.tsv");
    out << report.metric << "\tfraction\n";
    for (const auto& p : report.cdf) out << format_double(p.value) << '\t' << format_double(p.fraction) << '\n';
  }
  {
    auto out = open("_box.tsv");
    out << "min\tq1\tmedian\tq3\tmax\n";
    const auto& b = report.box;
    out << format_double(b.min) << '\t' << format_double(b.q1) << '\t' << format_double(b.median)
        << '\t' << format_double(b.q3) << '\t' << format_double(b.max) << '\n';
  }
}

void write_summary(const fs::path& path, std::span<const EvalReport> reports,
                   std::int64_t interval_seconds) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "model\ttask\tlength\thorizon_steps\thorizon_hours\tmetric\tmean\tmedian\tfraction_le_"
      << format_double(kCdfReadout) << "\tmachines\n";
  for (const auto& r : reports) {
    const double hours = static_cast<double>(r.length_steps * static_cast<std::size_t>(interval_seconds)) / 3600.0;
    out << r.model << '\t' << r.task << '\t' << r.length << '\t' << r.length_steps << '\t'
        << format_fixed(hours, 1) << '\t' << r.metric << '\t' << format_double(r.mean) << '\t'
        << format_double(r.box.median) << '\t' << format_double(cdf_fraction_at(r.cdf, kCdfReadout))
        << '\t' << r.per_machine.size() << '\n';
  }
}

}  // namespace hostload

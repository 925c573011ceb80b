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

// Writes a synthetic multi-machine usage trace in the simple schema.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hostload/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic host-load trace", "make_synthetic_trace"};
  std::string out_path;
  std::size_t machines = 4, days = 29, points_per_day = 288;
  std::uint64_t seed = 1;
  std::string kind = "bursty";
  app.add_option("--out", out_path, "Output CSV")->required();
  app.add_option("--machines", machines)->capture_default_str();
  app.add_option("--days", days)->capture_default_str();
  app.add_option("--points-per-day", points_per_day)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--kind", kind, "bursty or ar2")->check(CLI::IsMember({"bursty", "ar2"}))->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::vector<std::string> ids;
  std::vector<std::vector<double>> series;
  for (std::size_t m = 0; m < machines; ++m) {
    ids.push_back(std::to_string(1000 + m));
    series.push_back(kind == "ar2"
                         ? hostload::ar2_series(days * points_per_day, {}, seed + m)
                         : hostload::bursty_load_series(days, points_per_day, seed + m));
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << '\n';
    return 1;
  }
  hostload::write_series_trace(out, ids, series, 86400 / static_cast<std::int64_t>(points_per_day));
  return 0;
}

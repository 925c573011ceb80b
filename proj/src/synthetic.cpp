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

#include "hostload/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "hostload/errors.hpp"
#include "hostload/format.hpp"

namespace hostload {

std::vector<double> ar2_series(std::size_t length, const Ar2Spec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spec.noise_std);
  double y1 = 0.0, y2 = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double y = spec.phi1 * y1 + spec.phi2 * y2 + noise(rng);
    y2 = y1;
    y1 = y;
  }
  std::vector<double> out(length);
  for (double& v : out) {
    const double y = spec.phi1 * y1 + spec.phi2 * y2 + noise(rng);
    y2 = y1;
    y1 = y;
    v = std::max(0.0, spec.offset + y);
  }
  return out;
}

std::vector<double> bursty_load_series(std::size_t days, std::size_t points_per_day,
                                       std::uint64_t seed) {
  if (points_per_day < 8) throw UsageError("bursty series needs >= 8 points per day");
  std::mt19937_64 rng(seed);
  const Ar2Spec noise_spec{0.7, -0.1, 0.02, 0.0};
  const std::vector<double> noise = ar2_series(days * points_per_day, noise_spec, seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> jitter(0, points_per_day / 4);
  std::uniform_real_distribution<double> height(0.25, 0.35);
  const std::size_t busy = points_per_day / 3;

  std::vector<double> out(days * points_per_day);
  for (std::size_t d = 0; d < days; ++d) {
    const std::size_t start = points_per_day / 4 + jitter(rng);
    const double h = height(rng);
    for (std::size_t k = 0; k < points_per_day; ++k) {
      const std::size_t t = d * points_per_day + k;
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points_per_day);
      double v = 0.3 + 0.05 * std::sin(phase);
      if (k >= start && k < start + busy) v += h;
      out[t] = std::max(0.0, v + noise[t]);
    }
  }
  return out;
}

void write_series_trace(std::ostream& out, const std::vector<std::string>& machine_ids,
                        const std::vector<std::vector<double>>& series,
                        std::int64_t interval_seconds) {
  if (machine_ids.size() != series.size()) throw UsageError("one series per machine id");
  const std::int64_t width = interval_seconds * 1'000'000;
  out << "start_us,end_us,machine_id,cpu\n";
  for (std::size_t m = 0; m < series.size(); ++m) {
    for (std::size_t k = 0; k < series[m].size(); ++k) {
      const std::int64_t start = static_cast<std::int64_t>(k) * width;
      out << start << ',' << start + width << ',' << machine_ids[m] << ','
          << format_double(series[m][k]) << '\n';
    }
  }
}

}  // namespace hostload

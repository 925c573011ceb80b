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

// Deterministic synthetic load series and traces for tests, benchmarks and
// demos.

#ifndef HOSTLOAD_SYNTHETIC_HPP_
#define HOSTLOAD_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hostload {

struct Ar2Spec {
  double phi1 = 1.6;
  double phi2 = -0.7;
  double noise_std = 0.01;
  double offset = 0.5;
};

// offset + y_t with y_t = phi1 y_{t-1} + phi2 y_{t-2} + N(0, noise_std^2),
// after a burn-in. Values are clamped at 0.
std::vector<double> ar2_series(std::size_t length, const Ar2Spec& spec, std::uint64_t seed);

// Host-load-like series: a daily base curve, a rectangular busy period each
// day whose start jitters from day to day, and AR(2) noise; clamped at 0.
std::vector<double> bursty_load_series(std::size_t days, std::size_t points_per_day,
                                       std::uint64_t seed);

// Trace lines (start_us, end_us, machine_id, cpu) with one record per
// interval so aggregation reproduces each series exactly.
void write_series_trace(std::ostream& out, const std::vector<std::string>& machine_ids,
                        const std::vector<std::vector<double>>& series,
                        std::int64_t interval_seconds);

}  // namespace hostload

#endif  // HOSTLOAD_SYNTHETIC_HPP_

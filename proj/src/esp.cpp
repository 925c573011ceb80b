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

#include "hostload/esp.hpp"

#include <string>

#include "hostload/errors.hpp"

namespace hostload {

SegmentScheme make_scheme(std::size_t n, std::size_t baseline) {
  if (n == 0) throw UsageError("segment count must be >= 1");
  if (baseline == 0) throw UsageError("baseline segment must be >= 1 step");
  if (n > 40) throw UsageError("segment count too large");
  SegmentScheme scheme;
  scheme.baseline = baseline;
  scheme.lengths.reserve(n);
  scheme.lengths.push_back(baseline);
  for (std::size_t i = 2; i <= n; ++i) scheme.lengths.push_back(baseline << (i - 2));
  for (std::size_t s : scheme.lengths) scheme.total += s;
  return scheme;
}

SegmentScheme scheme_for_horizon(std::size_t horizon_steps, std::size_t baseline) {
  if (baseline == 0 || horizon_steps == 0 || horizon_steps % baseline != 0) {
    throw UsageError("horizon " + std::to_string(horizon_steps) +
                     " is not a multiple of the baseline segment");
  }
  const std::size_t ratio = horizon_steps / baseline;
  if ((ratio & (ratio - 1)) != 0) {
    throw UsageError("horizon " + std::to_string(horizon_steps) +
                     " steps is not baseline * 2^(n-1)");
  }
  std::size_t n = 1;
  while ((std::size_t{1} << (n - 1)) < ratio) ++n;
  return make_scheme(n, baseline);
}

EspPattern esp_transform(std::span<const double> future, const SegmentScheme& scheme) {
  if (future.size() < scheme.total) {
    throw DataError("esp: " + std::to_string(future.size()) + " future values for a scheme of " +
                    std::to_string(scheme.total) + " steps");
  }
  EspPattern means;
  means.reserve(scheme.segments());
  std::size_t pos = 0;
  for (std::size_t len : scheme.lengths) {
    double sum = 0.0;
    for (std::size_t k = 0; k < len; ++k) sum += future[pos + k];
    means.push_back(sum / static_cast<double>(len));
    pos += len;
  }
  return means;
}

}  // namespace hostload

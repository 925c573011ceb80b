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

#include "hostload/scaler.hpp"

#include <cmath>

#include "hostload/errors.hpp"

namespace hostload {

Scaler Scaler::fit(std::span<const double> values) {
  if (values.empty()) throw DataError("cannot fit a scaler on an empty range");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double std = std::sqrt(ss / static_cast<double>(values.size()));
  if (!(std > 0.0) || !std::isfinite(std)) {
    throw DataError("training range is constant; cannot standardize");
  }
  return {mean, std};
}

std::vector<double> Scaler::apply(std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = apply(xs[i]);
  return out;
}

std::vector<double> Scaler::invert(std::span<const double> zs) const {
  std::vector<double> out(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) out[i] = invert(zs[i]);
  return out;
}

}  // namespace hostload

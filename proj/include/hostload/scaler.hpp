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

#ifndef HOSTLOAD_SCALER_HPP_
#define HOSTLOAD_SCALER_HPP_

#include <span>
#include <vector>

namespace hostload {

// z-score transform fitted on a training range.
struct Scaler {
  double mean = 0.0;
  double std = 1.0;

  // Population mean and standard deviation. Throws DataError on an empty
  // range or zero variance.
  static Scaler fit(std::span<const double> values);

  double apply(double x) const { return (x - mean) / std; }
  double invert(double z) const { return z * std + mean; }
  std::vector<double> apply(std::span<const double> xs) const;
  std::vector<double> invert(std::span<const double> zs) const;
};

}  // namespace hostload

#endif  // HOSTLOAD_SCALER_HPP_

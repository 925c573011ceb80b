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

// Exponentially segmented patterns: a future interval is cut into consecutive
// blocks of length b, b, 2b, 4b, ... and each block is summarised by its mean.

#ifndef HOSTLOAD_ESP_HPP_
#define HOSTLOAD_ESP_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace hostload {

struct SegmentScheme {
  std::size_t baseline = 1;           // b, in sampling steps
  std::vector<std::size_t> lengths;   // s_1 .. s_n
  std::size_t total = 0;              // sum of lengths = b * 2^(n-1)

  std::size_t segments() const { return lengths.size(); }
};

using EspPattern = std::vector<double>;

// s_1 = b, s_i = b * 2^(i-2) for i >= 2. Throws UsageError for n == 0 or b == 0.
SegmentScheme make_scheme(std::size_t n, std::size_t baseline = 1);

// The scheme whose total equals `horizon_steps`; throws UsageError unless
// horizon_steps / baseline is a power of two.
SegmentScheme scheme_for_horizon(std::size_t horizon_steps, std::size_t baseline = 1);

// Block means over the first scheme.total values of `future`. Throws DataError
// when fewer values are supplied.
EspPattern esp_transform(std::span<const double> future, const SegmentScheme& scheme);

}  // namespace hostload

#endif  // HOSTLOAD_ESP_HPP_

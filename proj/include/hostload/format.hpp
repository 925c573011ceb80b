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

// Locale-independent number formatting for the delimited-text outputs.

#ifndef HOSTLOAD_FORMAT_HPP_
#define HOSTLOAD_FORMAT_HPP_

#include <string>

namespace hostload {

// Shortest representation that round-trips exactly.
std::string format_double(double v);
std::string format_fixed(double v, int decimals);

}  // namespace hostload

#endif  // HOSTLOAD_FORMAT_HPP_

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

#ifndef HOSTLOAD_ERRORS_HPP_
#define HOSTLOAD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hostload {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible matrix/vector/sequence dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad or insufficient input data (malformed trace, short series, I/O).
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or gradient during training.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace hostload

#endif  // HOSTLOAD_ERRORS_HPP_

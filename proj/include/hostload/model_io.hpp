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

// Binary model persistence. Layout (all integers little-endian):
//
//   8 bytes   magic "HLMODEL\0"
//   u32       format version (1)
//   u32       header length H
//   H bytes   header, "key=value\n" lines (dimensions, task, scaler, fusion,
//             hyperparameters); reals are C99 hex floats so they round-trip
//   u32       array count
//   per array: u16 name length, name bytes, u32 rows, u32 cols,
//              rows * cols IEEE-754 binary64 values, row-major
//   u32       CRC-32 (zlib polynomial) of every preceding byte
//
// Arrays appear in BiLstmModel::parameters() order. See docs/model_format.md.

#ifndef HOSTLOAD_MODEL_IO_HPP_
#define HOSTLOAD_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hostload/bilstm.hpp"
#include "hostload/scaler.hpp"
#include "hostload/trace.hpp"

namespace hostload {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelFile {
  BiLstmModel model;
  Scaler scaler;
  TaskSpec task;
  // Extra header entries (training hyperparameters etc.), written in order.
  std::vector<std::pair<std::string, std::string>> metadata;

  // Value of a metadata key, or `fallback`.
  std::string meta(const std::string& key, const std::string& fallback = "") const;
};

std::string encode_model(const ModelFile& file);
// Throws DataError on a bad magic, version, checksum or inconsistent content.
ModelFile decode_model(const std::string& bytes);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace hostload

#endif  // HOSTLOAD_MODEL_IO_HPP_

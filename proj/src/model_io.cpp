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

#include "hostload/model_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "hostload/errors.hpp"

namespace hostload {

namespace {

constexpr char kMagic[8] = {'H', 'L', 'M', 'O', 'D', 'E', 'L', '\0'};

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw DataError("model header: bad real '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw DataError("model header: bad count '" + s + "'");
  return static_cast<std::size_t>(v);
}

std::uint32_t crc(const std::string& bytes, std::size_t length) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(length)));
}

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t limit) : bytes_(bytes), limit_(limit) {}

  const char* take(std::size_t n) {
    if (pos_ + n > limit_) throw DataError("model file is truncated");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint16_t u16() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(2));
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::uint32_t u32() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(4));
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | p[k];
    return v;
  }
  double f64() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(8));
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | p[k];
    return std::bit_cast<double>(v);
  }
  std::size_t position() const { return pos_; }

 private:
  const std::string& bytes_;
  std::size_t limit_;
  std::size_t pos_ = 0;
};

struct ArrayShape {
  std::size_t rows;
  std::size_t cols;
};

std::vector<ArrayShape> array_shapes(const BiLstmModel& m) {
  std::vector<ArrayShape> shapes;
  const auto add_lstm = [&](const LstmParams& p) {
    for (const Matrix* w : {&p.w_i, &p.w_f, &p.w_o, &p.w_c}) shapes.push_back({w->rows(), w->cols()});
    for (const Vector* b : {&p.b_i, &p.b_f, &p.b_o, &p.b_c}) shapes.push_back({b->size(), 1});
  };
  add_lstm(m.fwd);
  if (m.bidirectional()) add_lstm(m.bwd);
  shapes.push_back({m.w_fc.rows(), m.w_fc.cols()});
  shapes.push_back({m.b_fc.size(), 1});
  shapes.push_back({m.w_r.rows(), m.w_r.cols()});
  return shapes;
}

}  // namespace

std::string ModelFile::meta(const std::string& key, const std::string& fallback) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return fallback;
}

std::string encode_model(const ModelFile& file) {
  BiLstmModel m = file.model;
  m.validate();
  std::ostringstream header;
  header << "format=hostload-model\n"
         << "architecture=" << to_string(m.architecture) << '\n'
         << "fusion=" << to_string(m.fusion) << '\n'
         << "input_size=" << m.dims.input_size << '\n'
         << "hidden_size=" << m.dims.hidden_size << '\n'
         << "window=" << m.dims.window << '\n'
         << "fc_size=" << m.dims.fc_size << '\n'
         << "output_size=" << m.dims.output_size << '\n'
         << "lambda1=" << hex_double(m.lambda1) << '\n'
         << "lambda2=" << hex_double(m.lambda2) << '\n'
         << "task=" << file.task.to_string() << '\n'
         << "esp_baseline=" << file.task.baseline << '\n'
         << "scaler_mean=" << hex_double(file.scaler.mean) << '\n'
         << "scaler_std=" << hex_double(file.scaler.std) << '\n';
  for (const auto& [k, v] : file.metadata) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw UsageError("model metadata key/value contains a reserved character: " + k);
    }
    header << k << '=' << v << '\n';
  }
  const std::string head = header.str();

  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(head.size()));
  out += head;

  const std::vector<std::string> names = m.parameter_names();
  const std::vector<ArrayShape> shapes = array_shapes(m);
  const ParamViews views = m.parameters();
  put_u32(out, static_cast<std::uint32_t>(views.size()));
  for (std::size_t k = 0; k < views.size(); ++k) {
    put_u16(out, static_cast<std::uint16_t>(names[k].size()));
    out += names[k];
    put_u32(out, static_cast<std::uint32_t>(shapes[k].rows));
    put_u32(out, static_cast<std::uint32_t>(shapes[k].cols));
    for (double v : views[k]) put_f64(out, v);
  }
  put_u32(out, crc(out, out.size()));
  return out;
}

ModelFile decode_model(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic + 12 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw DataError("not a hostload model file");
  }
  const std::size_t body = bytes.size() - 4;
  Reader tail(bytes, bytes.size());
  tail.take(body);
  if (tail.u32() != crc(bytes, body)) throw DataError("model file checksum mismatch");

  Reader in(bytes, body);
  in.take(sizeof kMagic);
  const std::uint32_t version = in.u32();
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version));
  }
  const std::uint32_t header_len = in.u32();
  const std::string head(in.take(header_len), header_len);

  std::map<std::string, std::string> keys;
  ModelFile file;
  std::istringstream lines(head);
  std::string line;
  static const char* const kCore[] = {"format",      "architecture", "fusion",       "input_size",
                                      "hidden_size", "window",       "fc_size",      "output_size",
                                      "lambda1",     "lambda2",      "task",         "esp_baseline",
                                      "scaler_mean", "scaler_std"};
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("model header: malformed line '" + line + "'");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    bool core = false;
    for (const char* c : kCore) core = core || key == c;
    if (core) {
      keys[key] = value;
    } else {
      file.metadata.emplace_back(std::move(key), std::move(value));
    }
  }
  for (const char* c : kCore) {
    if (!keys.count(c)) throw DataError(std::string("model header: missing ") + c);
  }
  if (keys["format"] != "hostload-model") throw DataError("model header: unknown format");

  ModelDims dims{parse_count(keys["input_size"]), parse_count(keys["hidden_size"]),
                 parse_count(keys["window"]), parse_count(keys["fc_size"]),
                 parse_count(keys["output_size"])};
  try {
    file.model = BiLstmModel::zeros(parse_architecture(keys["architecture"]), dims,
                                    parse_fusion(keys["fusion"]));
    file.task = TaskSpec::parse(keys["task"]);
  } catch (const UsageError& e) {
    throw DataError(std::string("model header: ") + e.what());
  } catch (const ShapeError& e) {
    throw DataError(std::string("model header: ") + e.what());
  }
  file.model.lambda1 = parse_real(keys["lambda1"]);
  file.model.lambda2 = parse_real(keys["lambda2"]);
  file.task.baseline = parse_count(keys["esp_baseline"]);
  file.scaler = {parse_real(keys["scaler_mean"]), parse_real(keys["scaler_std"])};
  if (file.task.output_size() != dims.output_size) {
    throw DataError("model header: task output does not match output_size");
  }

  const std::vector<std::string> names = file.model.parameter_names();
  const std::vector<ArrayShape> shapes = array_shapes(file.model);
  const ParamViews views = file.model.parameters();
  if (in.u32() != views.size()) throw DataError("model file: unexpected array count");
  for (std::size_t k = 0; k < views.size(); ++k) {
    const std::uint16_t name_len = in.u16();
    const std::string name(in.take(name_len), name_len);
    const std::size_t rows = in.u32(), cols = in.u32();
    if (name != names[k] || rows != shapes[k].rows || cols != shapes[k].cols) {
      throw DataError("model file: array '" + name + "' does not match the declared layout");
    }
    for (double& v : views[k]) v = in.f64();
  }
  if (in.position() != body) throw DataError("model file: trailing bytes");
  return file;
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  const std::string bytes = encode_model(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing model file " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_model(buf.str());
}

}  // namespace hostload

// Copyright 2026 The insg Authors. All Rights Reserved.
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

#include "insg/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "insg/errors.hpp"

namespace insg::nn {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

namespace {

constexpr char kMagic[8] = {'I', 'N', 'S', 'G', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_matrix(std::string& out, const Matrix& m) {
  out.append(reinterpret_cast<const char*>(m.data()),
             static_cast<std::size_t>(m.size()) * sizeof(double));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  Matrix get_matrix(Eigen::Index rows, Eigen::Index cols) {
    const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (n > (bytes_.size() - pos_) / sizeof(double)) fail("truncated tensor data");
    Matrix m(rows, cols);
    std::memcpy(m.data(), bytes_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
    return m;
  }

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("checkpoint: " + what + " at byte " + std::to_string(pos_), pos_);
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) fail("unexpected end of data");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Checkpoint capture(const ParamStore& store, nlohmann::json header, const AdamState* optimizer) {
  Checkpoint c;
  c.header = std::move(header);
  for (const auto& e : store.entries()) c.params.emplace_back(e.name, e.tensor.value());
  if (optimizer) c.optimizer = *optimizer;
  return c;
}

void restore(const Checkpoint& ckpt, ParamStore& store) {
  const auto& entries = store.entries();
  if (ckpt.params.size() != entries.size()) {
    throw FormatError("checkpoint: parameter count does not match the model");
  }
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& [name, value] = ckpt.params[k];
    if (name != entries[k].name) throw FormatError("checkpoint: unexpected parameter " + name);
    Tensor t = entries[k].tensor;
    if (t.rows() != value.rows() || t.cols() != value.cols()) {
      throw FormatError("checkpoint: shape mismatch for " + name);
    }
    t.mutable_value() = value;
  }
}

std::string serialize(const Checkpoint& c) {
  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  const std::string header = c.header.dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.params.size()));
  for (const auto& [name, m] : c.params) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    put_matrix(out, m);
  }
  put<std::uint8_t>(out, c.optimizer ? 1 : 0);
  if (c.optimizer) {
    if (c.optimizer->m.size() != c.params.size() || c.optimizer->v.size() != c.params.size()) {
      throw ContractError("checkpoint: optimizer state does not match parameters");
    }
    put<std::int64_t>(out, c.optimizer->step);
    for (std::size_t k = 0; k < c.params.size(); ++k) {
      put_matrix(out, c.optimizer->m[k]);
      put_matrix(out, c.optimizer->v[k]);
    }
  }
  return out;
}

Checkpoint deserialize(const std::string& bytes) {
  Reader r(bytes);
  if (r.get_string(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) r.fail("bad magic");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) r.fail("unsupported version " + std::to_string(version));
  Checkpoint c;
  const auto header_len = r.get<std::uint32_t>();
  const std::size_t header_at = r.pos();
  const std::string header = r.get_string(header_len);
  try {
    c.header = nlohmann::json::parse(header);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("checkpoint: bad header JSON", header_at + e.byte);
  }
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto name_len = r.get<std::uint32_t>();
    std::string name = r.get_string(name_len);
    if (r.get<std::uint32_t>() != 2) r.fail("only rank-2 tensors are supported");
    const auto rows = static_cast<Eigen::Index>(r.get<std::uint64_t>());
    const auto cols = static_cast<Eigen::Index>(r.get<std::uint64_t>());
    c.params.emplace_back(std::move(name), r.get_matrix(rows, cols));
  }
  const auto has_opt = r.get<std::uint8_t>();
  if (has_opt > 1) r.fail("bad optimizer flag");
  if (has_opt) {
    AdamState s;
    s.step = r.get<std::int64_t>();
    for (const auto& [name, m] : c.params) {
      s.m.push_back(r.get_matrix(m.rows(), m.cols()));
      s.v.push_back(r.get_matrix(m.rows(), m.cols()));
    }
    c.optimizer = std::move(s);
  }
  if (!r.done()) r.fail("trailing bytes");
  return c;
}

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  const std::string bytes = serialize(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("write failed: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace insg::nn

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

#pragma once

// Binary checkpoint layout (little-endian, version 1):
//
//   char[8]  magic "INSGCKPT"
//   u32      version
//   u32      header length H, then H bytes of UTF-8 JSON (model config,
//            taxonomy hash)
//   u32      parameter count P, then P records:
//              u32 name length, name bytes, u32 rank (= 2),
//              u64 rows, u64 cols, rows * cols f64 values (row-major)
//   u8       1 if optimizer state follows, else 0
//   [i64 step, then for every parameter in order: m values, v values]

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "insg/adam.hpp"

namespace insg::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  nlohmann::json header = nlohmann::json::object();
  std::vector<std::pair<std::string, Matrix>> params;
  std::optional<AdamState> optimizer;
};

Checkpoint capture(const ParamStore& store, nlohmann::json header,
                   const AdamState* optimizer = nullptr);
// Copies values into `store`. Names and shapes must match exactly.
void restore(const Checkpoint& ckpt, ParamStore& store);

std::string serialize(const Checkpoint& ckpt);
// Throws FormatError (with byte offset) on truncated or malformed input.
Checkpoint deserialize(const std::string& bytes);

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace insg::nn

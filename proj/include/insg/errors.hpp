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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace insg {

// A precondition of an operation was violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid user-supplied configuration or command-line value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent file contents. `byte_offset` is set when the
// failure can be located in the input stream.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what, std::size_t byte_offset = kNoOffset)
      : std::runtime_error(what), byte_offset_(byte_offset) {}

  static constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

  std::size_t byte_offset() const { return byte_offset_; }
  bool has_offset() const { return byte_offset_ != kNoOffset; }

 private:
  std::size_t byte_offset_;
};

// A NaN or Inf showed up in a forward/backward pass or in the loss.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace insg

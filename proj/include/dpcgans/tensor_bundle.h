//
// Copyright 2026 The dpcgans Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPCGANS_TENSOR_BUNDLE_H_
#define DPCGANS_TENSOR_BUNDLE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcgans/matrix.h"
#include "nlohmann/json.hpp"

namespace dpcgans {

// A JSON manifest plus named 64-bit float tensors.
//
// Wire layout (all integers little-endian):
//   magic        8 bytes
//   version      uint32
//   manifest     uint64 byte length, then UTF-8 JSON
//   tensors      for each entry of manifest["tensors"] in order:
//                  uint64 element count, then that many IEEE-754 doubles
// The manifest's "tensors" array lists {"name", "rows", "cols"} per tensor.
struct TensorBundle {
  nlohmann::json manifest = nlohmann::json::object();
  std::vector<std::pair<std::string, Matrix>> tensors;

  void Add(std::string name, Matrix value) {
    tensors.emplace_back(std::move(name), std::move(value));
  }
  // Returns the tensor called `name`, or nullptr.
  const Matrix* Find(std::string_view name) const;
};

std::string EncodeBundle(std::string_view magic, uint32_t version,
                         const TensorBundle& bundle);

// Fails with FailedPrecondition on a magic or version mismatch and with
// DataLoss on truncated or inconsistent payloads.
absl::StatusOr<TensorBundle> DecodeBundle(std::string_view bytes,
                                          std::string_view magic,
                                          uint32_t version);

}  // namespace dpcgans

#endif  // DPCGANS_TENSOR_BUNDLE_H_

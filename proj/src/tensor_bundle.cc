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

#include "dpcgans/tensor_bundle.h"

#include <bit>
#include <cstring>

#include "absl/strings/str_cat.h"

namespace dpcgans {
namespace {

constexpr size_t kMagicSize = 8;

void PutU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool Has(size_t n) const { return bytes_.size() - pos_ >= n; }

  uint64_t U64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  uint32_t U32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::string_view Take(size_t n) {
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

std::string PaddedMagic(std::string_view magic) {
  std::string m(magic.substr(0, kMagicSize));
  m.resize(kMagicSize, '\0');
  return m;
}

}  // namespace

const Matrix* TensorBundle::Find(std::string_view name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return &m;
  }
  return nullptr;
}

std::string EncodeBundle(std::string_view magic, uint32_t version,
                         const TensorBundle& bundle) {
  nlohmann::json manifest = bundle.manifest;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [name, m] : bundle.tensors) {
    list.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
  }
  manifest["tensors"] = std::move(list);
  const std::string text = manifest.dump();

  std::string out = PaddedMagic(magic);
  PutU32(out, version);
  PutU64(out, text.size());
  out += text;
  for (const auto& [name, m] : bundle.tensors) {
    PutU64(out, static_cast<uint64_t>(m.size()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      PutU64(out, std::bit_cast<uint64_t>(m.data()[i]));
    }
  }
  return out;
}

absl::StatusOr<TensorBundle> DecodeBundle(std::string_view bytes,
                                          std::string_view magic,
                                          uint32_t version) {
  Reader in(bytes);
  if (!in.Has(kMagicSize)) {
    return absl::DataLossError("corrupt payload: truncated header");
  }
  if (in.Take(kMagicSize) != PaddedMagic(magic)) {
    return absl::FailedPreconditionError(
        absl::StrCat("not a ", std::string(magic), " payload (bad magic)"));
  }
  if (!in.Has(4 + 8)) {
    return absl::DataLossError("corrupt payload: truncated header");
  }
  const uint32_t found = in.U32();
  if (found != version) {
    return absl::FailedPreconditionError(
        absl::StrCat(std::string(magic), " format version ", found,
                     " is not supported (expected ", version, ")"));
  }
  const uint64_t manifest_size = in.U64();
  if (!in.Has(manifest_size)) {
    return absl::DataLossError("corrupt payload: truncated manifest");
  }
  TensorBundle bundle;
  bundle.manifest = nlohmann::json::parse(in.Take(manifest_size), nullptr,
                                          /*allow_exceptions=*/false);
  if (bundle.manifest.is_discarded() || !bundle.manifest.is_object() ||
      !bundle.manifest.contains("tensors") ||
      !bundle.manifest["tensors"].is_array()) {
    return absl::DataLossError("corrupt payload: unreadable manifest");
  }
  for (const auto& entry : bundle.manifest["tensors"]) {
    if (!entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("rows") || !entry["rows"].is_number_unsigned() ||
        !entry.contains("cols") || !entry["cols"].is_number_unsigned()) {
      return absl::DataLossError("corrupt payload: bad tensor entry");
    }
    const uint64_t rows = entry["rows"].get<uint64_t>();
    const uint64_t cols = entry["cols"].get<uint64_t>();
    if (!in.Has(8)) {
      return absl::DataLossError("corrupt payload: truncated tensor data");
    }
    const uint64_t count = in.U64();
    if (count != rows * cols) {
      return absl::DataLossError(absl::StrCat(
          "corrupt payload: tensor '", entry["name"].get<std::string>(),
          "' length ", count, " does not match shape"));
    }
    if (count > in.remaining() / 8) {
      return absl::DataLossError("corrupt payload: truncated tensor data");
    }
    Matrix m(rows, cols);
    for (uint64_t i = 0; i < count; ++i) m.data()[i] = std::bit_cast<double>(in.U64());
    bundle.tensors.emplace_back(entry["name"].get<std::string>(), std::move(m));
  }
  if (in.remaining() != 0) {
    return absl::DataLossError("corrupt payload: trailing bytes");
  }
  bundle.manifest.erase("tensors");
  return bundle;
}

}  // namespace dpcgans

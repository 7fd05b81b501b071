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

#include <cstring>

#include "gtest/gtest.h"

namespace dpcgans {
namespace {

TensorBundle Sample() {
  TensorBundle bundle;
  bundle.manifest["note"] = "hello";
  Matrix a(2, 3);
  a << 1, 2, 3, 4, 5, 6.5;
  bundle.Add("a", a);
  bundle.Add("empty", Matrix(0, 4));
  bundle.Add("tiny", Matrix::Constant(1, 1, 1e-300));
  return bundle;
}

TEST(TensorBundleTest, RoundTripIsBitExact) {
  const TensorBundle bundle = Sample();
  const std::string bytes = EncodeBundle("TESTMAGI", 3, bundle);
  absl::StatusOr<TensorBundle> back = DecodeBundle(bytes, "TESTMAGI", 3);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->manifest["note"], "hello");
  ASSERT_EQ(back->tensors.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back->tensors[i].first, bundle.tensors[i].first);
    EXPECT_EQ(back->tensors[i].second, bundle.tensors[i].second);
  }
  ASSERT_NE(back->Find("a"), nullptr);
  EXPECT_EQ((*back->Find("a"))(1, 2), 6.5);
  EXPECT_EQ(back->Find("missing"), nullptr);
}

TEST(TensorBundleTest, HeaderIsLittleEndian) {
  const std::string bytes = EncodeBundle("TESTMAGI", 0x01020304, Sample());
  ASSERT_GE(bytes.size(), 12u);
  EXPECT_EQ(bytes.substr(0, 8), "TESTMAGI");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 0x04);
  EXPECT_EQ(static_cast<unsigned char>(bytes[11]), 0x01);
}

TEST(TensorBundleTest, MagicAndVersionMismatchAreFailedPrecondition) {
  const std::string bytes = EncodeBundle("TESTMAGI", 3, Sample());
  EXPECT_EQ(DecodeBundle(bytes, "OTHERMAG", 3).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(DecodeBundle(bytes, "TESTMAGI", 4).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(TensorBundleTest, DamageIsDataLoss) {
  const std::string bytes = EncodeBundle("TESTMAGI", 3, Sample());
  for (size_t cut : {size_t{13}, size_t{30}, bytes.size() - 1}) {
    EXPECT_EQ(DecodeBundle(bytes.substr(0, cut), "TESTMAGI", 3).status().code(),
              absl::StatusCode::kDataLoss)
        << "cut at " << cut;
  }
  EXPECT_EQ(DecodeBundle(bytes + "x", "TESTMAGI", 3).status().code(),
            absl::StatusCode::kDataLoss);
  // Corrupt the manifest's first byte (just after the length field).
  std::string bad = bytes;
  bad[20] = '#';
  EXPECT_EQ(DecodeBundle(bad, "TESTMAGI", 3).status().code(),
            absl::StatusCode::kDataLoss);
}

}  // namespace
}  // namespace dpcgans

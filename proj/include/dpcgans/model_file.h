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

// The trained-model container: one tensor bundle whose manifest carries the
// schema, transform, condition table, training config, privacy spec,
// accountant state, training history and the final epsilon, and whose tensors
// are the generator and critic parameters under "generator/" and
// "discriminator/" prefixes.

#ifndef DPCGANS_MODEL_FILE_H_
#define DPCGANS_MODEL_FILE_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpcgans/trainer.h"

namespace dpcgans {

inline constexpr char kModelMagic[] = "DPCGANS";
inline constexpr uint32_t kModelVersion = 1;

std::string EncodeModel(const GanModel& model);

// Refuses other format versions (FailedPrecondition), corrupt payloads
// (DataLoss), embedded widths that disagree with each other and a stored
// epsilon that differs from the accountant's recomputation (DataLoss).
absl::StatusOr<GanModel> DecodeModel(std::string_view bytes);

absl::Status SaveModel(const GanModel& model, const std::string& path);
absl::StatusOr<GanModel> LoadModel(const std::string& path);

}  // namespace dpcgans

#endif  // DPCGANS_MODEL_FILE_H_

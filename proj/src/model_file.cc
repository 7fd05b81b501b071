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


#include "dpcgans/model_file.h"

#include <fstream>
#include <iterator>

#include "absl/strings/str_cat.h"
#include "dpcgans/json_util.h"
#include "dpcgans/tensor_bundle.h"

namespace dpcgans {
namespace {

constexpr char kGeneratorPrefix[] = "generator/";
constexpr char kDiscriminatorPrefix[] = "discriminator/";

void AppendPrefixed(const TensorBundle& part, std::string_view prefix,
                    TensorBundle& out) {
  for (const auto& [name, value] : part.tensors) {
    out.Add(absl::StrCat(std::string(prefix), name), value);
  }
}

TensorBundle ExtractPrefixed(const TensorBundle& whole,
                             std::string_view prefix,
                             const nlohmann::json& manifest) {
  TensorBundle part;
  part.manifest = manifest;
  for (const auto& [name, value] : whole.tensors) {
    if (name.starts_with(prefix)) {
      part.Add(name.substr(prefix.size()), value);
    }
  }
  return part;
}

bool SameSpans(const std::vector<OutputSpan>& a,
               const std::vector<OutputSpan>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].offset != b[i].offset || a[i].width != b[i].width ||
        a[i].activation != b[i].activation) {
      return false;
    }
  }
  return true;
}

absl::Status CheckConsistency(const GanModel& m) {
  const size_t cond =
      m.conditions.enabled() ? m.conditions.layout().width : 0;
  const GeneratorConfig& g = m.generator.config();
  const DiscriminatorConfig& d = m.discriminator.config();
  if (!SameSpans(g.spans, m.transform.output_spans())) {
    return absl::DataLossError(
        "inconsistent model file: generator output does not match transform");
  }
  if (g.condition_dim != cond || g.noise_dim != m.config.noise_dim) {
    return absl::DataLossError(
        "inconsistent model file: generator input width");
  }
  if (d.row_dim != m.transform.encoded_width() + cond ||
      d.pac != m.config.pac) {
    return absl::DataLossError(
        "inconsistent model file: discriminator input width");
  }
  if (m.batch_size == 0 || m.batch_size % m.config.pac != 0) {
    return absl::DataLossError("inconsistent model file: batch size");
  }
  if (m.accountant.steps() != m.history.discriminator_updates) {
    return absl::DataLossError(
        "inconsistent model file: accountant steps differ from updates");
  }
  return absl::OkStatus();
}

}  // namespace

std::string EncodeModel(const GanModel& model) {
  TensorBundle bundle;
  const TensorBundle g = model.generator.ToBundle();
  const TensorBundle d = model.discriminator.ToBundle();
  bundle.manifest = {
      {"schema", model.transform.schema().ToJson()},
      {"transform", model.transform.ToJson()},
      {"conditions", model.conditions.ToJson()},
      {"config", model.config.ToJson()},
      {"batch_size", model.batch_size},
      {"privacy", model.privacy.ToJson()},
      {"accountant", model.accountant.ToJson()},
      {"history", model.history.ToJson()},
      {"epsilon", RealToJson(model.Epsilon())},
      {"generator", g.manifest},
      {"discriminator", d.manifest}};
  AppendPrefixed(g, kGeneratorPrefix, bundle);
  AppendPrefixed(d, kDiscriminatorPrefix, bundle);
  return EncodeBundle(kModelMagic, kModelVersion, bundle);
}

absl::StatusOr<GanModel> DecodeModel(std::string_view bytes) {
  absl::StatusOr<TensorBundle> bundle =
      DecodeBundle(bytes, kModelMagic, kModelVersion);
  if (!bundle.ok()) return bundle.status();
  const nlohmann::json& m = bundle->manifest;

  GanModel model;
  double stored_epsilon = 0.0;
  try {
    absl::StatusOr<TableSchema> schema = TableSchema::FromJson(m.at("schema"));
    if (!schema.ok()) return schema.status();
    absl::StatusOr<TransformModel> transform =
        TransformModel::FromJson(m.at("transform"));
    if (!transform.ok()) return transform.status();
    if (!(transform->schema() == *schema)) {
      return absl::DataLossError(
          "inconsistent model file: transform schema differs");
    }
    model.transform = *std::move(transform);
    absl::StatusOr<PairFrequencyTable> conditions =
        PairFrequencyTable::FromJson(m.at("conditions"), *schema);
    if (!conditions.ok()) return conditions.status();
    model.conditions = *std::move(conditions);
    absl::StatusOr<TrainingConfig> config =
        TrainingConfig::FromJson(m.at("config"));
    if (!config.ok()) return config.status();
    model.config = *config;
    model.batch_size = m.at("batch_size").get<size_t>();
    absl::StatusOr<PrivacySpec> privacy = PrivacySpec::FromJson(m.at("privacy"));
    if (!privacy.ok()) return privacy.status();
    model.privacy = *privacy;
    absl::StatusOr<AccountantState> accountant =
        AccountantState::FromJson(m.at("accountant"));
    if (!accountant.ok()) return accountant.status();
    model.accountant = *std::move(accountant);
    absl::StatusOr<TrainingHistory> history =
        TrainingHistory::FromJson(m.at("history"));
    if (!history.ok()) return history.status();
    model.history = *std::move(history);
    stored_epsilon = RealFromJson(m.at("epsilon"));

    absl::StatusOr<GeneratorNet> g = GeneratorNet::FromBundle(
        ExtractPrefixed(*bundle, kGeneratorPrefix, m.at("generator")));
    if (!g.ok()) return g.status();
    model.generator = *std::move(g);
    absl::StatusOr<DiscriminatorNet> d = DiscriminatorNet::FromBundle(
        ExtractPrefixed(*bundle, kDiscriminatorPrefix, m.at("discriminator")));
    if (!d.ok()) return d.status();
    model.discriminator = *std::move(d);
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(
        absl::StrCat("corrupt model file manifest: ", e.what()));
  }
  if (absl::Status s = CheckConsistency(model); !s.ok()) return s;
  const double recomputed = model.Epsilon();
  if (!(recomputed == stored_epsilon)) {
    return absl::DataLossError(absl::StrCat(
        "inconsistent model file: stored epsilon ", stored_epsilon,
        " differs from the accountant's ", recomputed));
  }
  return model;
}

absl::Status SaveModel(const GanModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  const std::string bytes = EncodeModel(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) return absl::InternalError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<GanModel> LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return DecodeModel(bytes);
}

}  // namespace dpcgans

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


#include "dpcgans/cli.h"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "dpcgans/data_table.h"
#include "dpcgans/json_util.h"
#include "dpcgans/model_file.h"
#include "dpcgans/report.h"
#include "dpcgans/trainer.h"

namespace dpcgans {
namespace {

struct FitArgs {
  std::string data;
  std::string schema;
  std::string out;
  int epochs = 2000;
  size_t batch_size = 500;
  std::string epsilon = "inf";
  double delta = 1e-5;
  std::optional<double> sigma;
  uint64_t seed = 0;
  std::string history;
};

struct SampleArgs {
  std::string model;
  size_t rows = 0;
  std::string out;
  uint64_t seed = 0;
};

struct EvaluateArgs {
  std::string real_train;
  std::string real_test;
  std::string synth;
  std::string schema;
  std::string out;
  double identity_threshold = 0.1;
  std::optional<std::string> target;
  uint64_t seed = 0;
};

// Usage problems found after CLI11 accepted the flags.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

uint64_t EffectiveSeed(uint64_t flag) {
  const char* env = std::getenv("DPCGANS_SEED");
  if (env == nullptr || *env == '\0') return flag;
  uint64_t seed = 0;
  if (!absl::SimpleAtoi(env, &seed)) {
    throw UsageError(absl::StrCat("DPCGANS_SEED is not an unsigned integer: ",
                                  env));
  }
  return seed;
}

double ParseEpsilon(const std::string& text) {
  if (text == "inf") return kInfinity;
  double v = 0.0;
  if (!absl::SimpleAtod(text, &v) || !std::isfinite(v) || !(v > 0.0)) {
    throw UsageError(absl::StrCat(
        "--epsilon must be a positive number or inf, got '", text, "'"));
  }
  return v;
}

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return absl::NotFoundError(absl::StrCat("cannot write ", path));
  out << text;
  if (!out) return absl::InternalError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int RunFit(const FitArgs& args, std::ostream& out, std::ostream& err) {
  TrainingConfig config;
  config.epochs = args.epochs;
  config.batch_size = args.batch_size;
  config.target_epsilon = ParseEpsilon(args.epsilon);
  config.delta = args.delta;
  config.noise_multiplier = args.sigma;
  config.seed = EffectiveSeed(args.seed);
  if (absl::Status s = config.Validate(); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitUsage;
  }

  absl::StatusOr<TableSchema> schema = TableSchema::LoadJson(args.schema);
  if (!schema.ok()) return Fail(schema.status(), err);
  absl::StatusOr<DataTable> data = LoadCsv(args.data, *schema);
  if (!data.ok()) return Fail(data.status(), err);

  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<Trainer> trainer = Trainer::Create(*data, config);
  if (!trainer.ok()) return Fail(trainer.status(), err);
  const GanModel& model = trainer->model();
  out << "noise_multiplier: " << model.privacy.noise_multiplier
      << (args.sigma.has_value() ? " (given)" : " (calibrated)") << "\n";
  if (absl::Status s = trainer->Run(); !s.ok()) return Fail(s, err);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (absl::Status s = SaveModel(model, args.out); !s.ok()) return Fail(s, err);
  const std::string history_path =
      args.history.empty() ? args.out + ".history.json" : args.history;
  if (absl::Status s = WriteText(history_path, model.history.ToJson().dump(2));
      !s.ok()) {
    return Fail(s, err);
  }
  const double eps = model.Epsilon();
  out << "epsilon: " << (std::isinf(eps) ? std::string("inf")
                                         : absl::StrCat(eps))
      << "\n"
      << "epochs_completed: " << model.history.epochs_completed << " of "
      << config.epochs << (model.history.halted_by_budget ? " (budget reached)" : "")
      << "\n"
      << "wall_time_seconds: " << seconds << "\n";
  return kExitOk;
}

int RunSample(const SampleArgs& args, std::ostream& out, std::ostream& err) {
  if (args.rows < 1) {
    err << "error: --rows must be >= 1\n";
    return kExitUsage;
  }
  const uint64_t seed = EffectiveSeed(args.seed);
  absl::StatusOr<GanModel> model = LoadModel(args.model);
  if (!model.ok()) return Fail(model.status(), err);
  absl::StatusOr<DataTable> synth = Generate(*model, args.rows, seed);
  if (!synth.ok()) return Fail(synth.status(), err);
  if (absl::Status s = SaveCsv(*synth, args.out); !s.ok()) return Fail(s, err);
  out << "rows: " << synth->num_rows() << "\n";
  return kExitOk;
}

int RunEvaluate(const EvaluateArgs& args, std::ostream& out,
                std::ostream& err) {
  if (!(args.identity_threshold > 0.0)) {
    err << "error: --identity-threshold must be positive\n";
    return kExitUsage;
  }
  EvaluationOptions options;
  options.identity_threshold = args.identity_threshold;
  options.target = args.target;
  options.seed = EffectiveSeed(args.seed);

  absl::StatusOr<TableSchema> schema = TableSchema::LoadJson(args.schema);
  if (!schema.ok()) return Fail(schema.status(), err);
  if (options.target.has_value() &&
      schema->ColumnIndex(*options.target) < 0) {
    return Fail(absl::InvalidArgumentError(absl::StrCat(
                    "unknown target column '", *options.target, "'")),
                err);
  }
  absl::StatusOr<DataTable> train = LoadCsv(args.real_train, *schema);
  if (!train.ok()) return Fail(train.status(), err);
  absl::StatusOr<DataTable> test = LoadCsv(args.real_test, *schema);
  if (!test.ok()) return Fail(test.status(), err);
  absl::StatusOr<DataTable> synth = LoadCsv(args.synth, *schema);
  if (!synth.ok()) return Fail(synth.status(), err);

  absl::StatusOr<EvaluationReport> report =
      Evaluate(*train, *test, *synth, options);
  if (!report.ok()) return Fail(report.status(), err);
  if (absl::Status s =
          WriteText(args.out, report->ToJson(UtcTimestamp()).dump(2) + "\n");
      !s.ok()) {
    return Fail(s, err);
  }
  out << "report: " << args.out << "\n";
  return kExitOk;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kOutOfRange:
      return kExitPrivacy;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kFailedPrecondition:
      return kExitData;
    default:
      return kExitInternal;
  }
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private conditional GAN for tabular data",
               kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Train a model");
  fit_cmd->add_option("--data", fit.data, "Training CSV")->required();
  fit_cmd->add_option("--schema", fit.schema, "Schema JSON")->required();
  fit_cmd->add_option("--out", fit.out, "Model file to write")->required();
  fit_cmd->add_option("--epochs", fit.epochs)->capture_default_str()
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--batch-size", fit.batch_size)->capture_default_str()
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--epsilon", fit.epsilon, "Privacy budget, or inf")
      ->capture_default_str();
  fit_cmd->add_option("--delta", fit.delta)->capture_default_str();
  fit_cmd->add_option("--sigma", fit.sigma,
                      "Noise multiplier; calibrated from --epsilon if omitted")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--seed", fit.seed)->capture_default_str();
  fit_cmd->add_option("--history", fit.history,
                      "History JSON (default: <out>.history.json)");

  SampleArgs sample;
  CLI::App* sample_cmd = app.add_subcommand("sample", "Generate synthetic rows");
  sample_cmd->add_option("--model", sample.model)->required();
  sample_cmd->add_option("--rows", sample.rows)->required();
  sample_cmd->add_option("--out", sample.out)->required();
  sample_cmd->add_option("--seed", sample.seed)->capture_default_str();

  EvaluateArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "Score a synthetic table against real data");
  eval_cmd->add_option("--real-train", eval.real_train)->required();
  eval_cmd->add_option("--real-test", eval.real_test)->required();
  eval_cmd->add_option("--synth", eval.synth)->required();
  eval_cmd->add_option("--schema", eval.schema)->required();
  eval_cmd->add_option("--out", eval.out)->required();
  eval_cmd->add_option("--identity-threshold", eval.identity_threshold)
      ->capture_default_str();
  eval_cmd->add_option("--target", eval.target);
  eval_cmd->add_option("--seed", eval.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) return RunFit(fit, out, err);
    if (*sample_cmd) return RunSample(sample, out, err);
    return RunEvaluate(eval, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace dpcgans

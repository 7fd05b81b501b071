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


#ifndef DPCGANS_CLI_H_
#define DPCGANS_CLI_H_

#include <ostream>

#include "absl/status/status.h"

namespace dpcgans {

// Process exit codes, one per failure class.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitPrivacy = 4,
  kExitInternal = 5,
};

// Maps a library status to its failure class: OutOfRange marks an infeasible
// privacy budget; input-side codes (InvalidArgument, NotFound, DataLoss,
// FailedPrecondition) are data or schema problems; anything else is internal.
int ExitCodeFor(const absl::Status& status);

// Runs `dpcgans fit|sample|evaluate ...` and returns the exit code. Progress
// goes to `out`, diagnostics to `err`. DPCGANS_SEED, when set, replaces the
// --seed value.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dpcgans

#endif  // DPCGANS_CLI_H_

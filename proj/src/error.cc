// Copyright 2026 The piiqa Authors.
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

#include "piiqa/error.h"

namespace piiqa {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid_argument";
    case Errc::kInvalidUtf8: return "invalid_utf8";
    case Errc::kUnknownLabel: return "unknown_label";
    case Errc::kUnknownLocale: return "unknown_locale";
    case Errc::kTaskMismatch: return "task_mismatch";
    case Errc::kInsufficientSubmissions: return "insufficient_submissions";
    case Errc::kInsufficientPool: return "insufficient_pool";
    case Errc::kInvalidState: return "invalid_state";
    case Errc::kUnknownTask: return "unknown_task";
    case Errc::kUnknownSubmission: return "unknown_submission";
    case Errc::kInvalidGroundTruth: return "invalid_ground_truth";
    case Errc::kPromptMismatch: return "prompt_mismatch";
    case Errc::kUnknownAxis: return "unknown_axis";
    case Errc::kNoTemplate: return "no_template";
    case Errc::kBinInfeasible: return "bin_infeasible";
    case Errc::kSpecInvalid: return "spec_invalid";
    case Errc::kUnreadableFile: return "unreadable_file";
    case Errc::kUnwritableFile: return "unwritable_file";
    case Errc::kSchemaViolation: return "schema_violation";
    case Errc::kConflict: return "conflict";
    case Errc::kReferenceData: return "reference_data";
  }
  return "unknown";
}

}  // namespace piiqa

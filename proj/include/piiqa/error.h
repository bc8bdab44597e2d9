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

#ifndef PIIQA_ERROR_H_
#define PIIQA_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace piiqa {

enum class Errc {
  kInvalidArgument,
  kInvalidUtf8,
  kUnknownLabel,
  kUnknownLocale,
  kTaskMismatch,
  kInsufficientSubmissions,
  kInsufficientPool,
  kInvalidState,
  kUnknownTask,
  kUnknownSubmission,
  kInvalidGroundTruth,
  kPromptMismatch,
  kUnknownAxis,
  kNoTemplate,
  kBinInfeasible,
  kSpecInvalid,
  kUnreadableFile,
  kUnwritableFile,
  kSchemaViolation,
  kConflict,
  kReferenceData,
};

// Stable snake_case name used in reports, HTTP bodies and CLI diagnostics.
std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace piiqa

#endif  // PIIQA_ERROR_H_

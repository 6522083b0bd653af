// Copyright 2026 The nvdfs Authors
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

#include "nvdfs/error.hpp"

namespace nvdfs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::io: return "IoError";
    case ErrorCode::labeling_ambiguity: return "LabelingAmbiguity";
    case ErrorCode::degenerate_field: return "DegenerateField";
    case ErrorCode::step_unstable: return "StepUnstable";
    case ErrorCode::budget_exhausted: return "BudgetExhausted";
    case ErrorCode::ill_conditioned: return "IllConditioned";
    case ErrorCode::degenerate_x: return "DegenerateX";
    case ErrorCode::flat_trace: return "FlatTrace";
  }
  return "Unknown";
}

}  // namespace nvdfs

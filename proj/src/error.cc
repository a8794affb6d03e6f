// Copyright 2026 The Designsearch Authors.
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

#include "designsearch/error.h"

namespace designsearch {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedMarkup: return "MalformedMarkup";
    case ErrorCode::kUnknownChildId: return "UnknownChildId";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kJointArityMismatch: return "JointArityMismatch";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kOddPopulation: return "OddPopulation";
    case ErrorCode::kEmptyWinnerPool: return "EmptyWinnerPool";
    case ErrorCode::kInvalidSequence: return "InvalidSequence";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kUnknownAssignment: return "UnknownAssignment";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kNotReady: return "NotReady";
    case ErrorCode::kLeaseExpired: return "LeaseExpired";
    case ErrorCode::kNotLeaseHolder: return "NotLeaseHolder";
    case ErrorCode::kAlreadySubmitted: return "AlreadySubmitted";
    case ErrorCode::kStorage: return "Storage";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace designsearch

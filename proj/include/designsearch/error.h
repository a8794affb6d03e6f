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

#ifndef DESIGNSEARCH_ERROR_H_
#define DESIGNSEARCH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace designsearch {

enum class ErrorCode {
  // Markup.
  kMalformedMarkup,
  kUnknownChildId,
  kDuplicateId,
  kJointArityMismatch,
  kValidationFailed,
  // Evolution.
  kInvalidConfig,
  kOddPopulation,
  kEmptyWinnerPool,
  kInvalidSequence,
  // Task service.
  kUnknownTask,
  kUnknownAssignment,
  kInvalidState,
  kNotReady,
  kLeaseExpired,
  kNotLeaseHolder,
  kAlreadySubmitted,
  kStorage,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// The single exception type thrown by the library. `subject()` names the
// offending entity (element id, task id, assignment id) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string subject = {})
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const { return code_; }
  const std::string& subject() const { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace designsearch

#endif  // DESIGNSEARCH_ERROR_H_

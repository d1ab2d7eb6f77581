// Copyright 2026 The FSMT Toolkit Authors
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

#ifndef FSMT_ERROR_HPP_
#define FSMT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsmt {

// Every failure the toolkit reports on purpose carries one of these kinds.
// Callers branch on kind(); what() is for humans.
enum class ErrorKind {
  kIo,
  kMalformedRecord,
  kUnbalancedMarkup,
  kEmptyField,
  kDuplicateId,
  kEmptyCorpus,
  kInvalidUnit,
  kLeadingOrTrailingSeparator,
  kAdjacentSeparators,
  kModelFormat,
  kSchema,
  kDuplicateRule,
  kEmptySide,
  kNTooLarge,
  kMissingPlaceholder,
  kPoolFormalityMismatch,
  kAttemptOutOfRange,
  kExhaustedRetries,
  kNonRetryableStatus,
  kMalformedResponse,
  kEmptyCandidate,
  kInvalidRequest,
  kAbortThreshold,
  kInvalidConfig,
  kLengthMismatch,
  kNoAnnotatedSegments,
  kEmptyInput,
  kDuplicateRowKey,
  kUnmatchedCometRow,
  kUsage,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the HTTP layer; status 0 means the transport itself failed.
class StatusError : public Error {
 public:
  StatusError(ErrorKind kind, int status, const std::string& message)
      : Error(kind, message), status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace fsmt

#endif  // FSMT_ERROR_HPP_

// Copyright 2026 The Lexaspect Authors.
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

#ifndef LEXASPECT_ERROR_HPP_
#define LEXASPECT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lexaspect {

// Every failure the library reports carries one of these codes. The CLI
// prints the code name verbatim so callers can dispatch on it.
enum class ErrorCode {
  kIoError,
  kInvalidArgument,
  // corpus
  kMalformedLine,
  kDuplicateId,
  kUnknownLabel,
  kEmptyTokens,
  // stats
  kEmptyTable,
  kEmptyCorpus,
  kDegenerateTable,
  kLengthMismatch,
  kDegenerateAgreement,
  // embeddings
  kBadHeader,
  kDimensionMismatch,
  kUnparsableFloat,
  kMissingUtteranceVector,
  // classifier
  kUnknownClassLabel,
  kEmptyData,
  kBadModel,
  // evaluation
  kBadK,
  kEmptyTrain,
  kTargetMissing,
  kMixedDimensions,
  kTooFewContributors,
  kProvenanceViolation,
  // cli
  kIdSetMismatch,
  kMixedDomains,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lexaspect

#endif  // LEXASPECT_ERROR_HPP_

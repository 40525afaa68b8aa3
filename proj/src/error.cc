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

#include "lexaspect/error.hpp"

namespace lexaspect {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kEmptyTokens: return "EmptyTokens";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDegenerateTable: return "DegenerateTable";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDegenerateAgreement: return "DegenerateAgreement";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnparsableFloat: return "UnparsableFloat";
    case ErrorCode::kMissingUtteranceVector: return "MissingUtteranceVector";
    case ErrorCode::kUnknownClassLabel: return "UnknownClassLabel";
    case ErrorCode::kEmptyData: return "EmptyData";
    case ErrorCode::kBadModel: return "BadModel";
    case ErrorCode::kBadK: return "BadK";
    case ErrorCode::kEmptyTrain: return "EmptyTrain";
    case ErrorCode::kTargetMissing: return "TargetMissing";
    case ErrorCode::kMixedDimensions: return "MixedDimensions";
    case ErrorCode::kTooFewContributors: return "TooFewContributors";
    case ErrorCode::kProvenanceViolation: return "ProvenanceViolation";
    case ErrorCode::kIdSetMismatch: return "IdSetMismatch";
    case ErrorCode::kMixedDomains: return "MixedDomains";
  }
  return "Unknown";
}

}  // namespace lexaspect

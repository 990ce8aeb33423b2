// src/common/error.cc

// Copyright 2026 The aaekit authors

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

#include "aaekit/common/error.hpp"

namespace aaekit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kSequenceTooLong: return "SequenceTooLong";
    case ErrorCode::kDataError: return "DataError";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kEncoderUnavailable: return "EncoderUnavailable";
    case ErrorCode::kEncoderFailed: return "EncoderFailed";
    case ErrorCode::kAlignmentFailed: return "AlignmentFailed";
    case ErrorCode::kInsufficientBabbleSources: return "InsufficientBabbleSources";
    case ErrorCode::kZeroPowerInput: return "ZeroPowerInput";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kIncompleteGrid: return "IncompleteGrid";
    case ErrorCode::kNumericalError: return "NumericalError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace aaekit

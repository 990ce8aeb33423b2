// include/aaekit/common/error.hpp

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

#ifndef AAEKIT_COMMON_ERROR_HPP_
#define AAEKIT_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace aaekit {

enum class ErrorCode {
  kNotFound,
  kUnsupportedFormat,
  kIoError,
  kRateMismatch,
  kTooShort,
  kInvalidConfig,
  kSequenceTooLong,
  kDataError,
  kEmptyReference,
  kEncoderUnavailable,
  kEncoderFailed,
  kAlignmentFailed,
  kInsufficientBabbleSources,
  kZeroPowerInput,
  kEmptyInput,
  kTooFewSamples,
  kLengthMismatch,
  kMissingColumn,
  kIncompleteGrid,
  kNumericalError,
  kInvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Exception type carrying one of the toolkit error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace aaekit

#endif  // AAEKIT_COMMON_ERROR_HPP_

// include/aaekit/asr/vocab.hpp

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

#ifndef AAEKIT_ASR_VOCAB_HPP_
#define AAEKIT_ASR_VOCAB_HPP_

#include <string>
#include <vector>

#include "aaekit/common/error.hpp"

namespace aaekit::asr {

// Token layout: index 0 = blank, then one index per character, then sos and
// eos at the end.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::string chars) : chars_(std::move(chars)) {
    for (std::size_t i = 0; i < chars_.size(); ++i) {
      for (std::size_t j = i + 1; j < chars_.size(); ++j) {
        require(chars_[i] != chars_[j], ErrorCode::kInvalidConfig, "duplicate vocab character");
      }
    }
  }

  const std::string& chars() const { return chars_; }
  int size() const { return static_cast<int>(chars_.size()) + 3; }
  int blank_id() const { return 0; }
  int sos_id() const { return static_cast<int>(chars_.size()) + 1; }
  int eos_id() const { return static_cast<int>(chars_.size()) + 2; }

  bool is_char(int id) const { return id >= 1 && id <= static_cast<int>(chars_.size()); }

  int char_to_id(char c) const {
    auto pos = chars_.find(c);
    require(pos != std::string::npos, ErrorCode::kDataError,
            std::string("character not in vocabulary: ") + c);
    return static_cast<int>(pos) + 1;
  }

  char id_to_char(int id) const {
    require(is_char(id), ErrorCode::kInvalidArgument, "token id is not a character");
    return chars_[static_cast<std::size_t>(id - 1)];
  }

  std::vector<int> encode(const std::string& text) const {
    std::vector<int> out;
    out.reserve(text.size());
    for (char c : text) out.push_back(char_to_id(c));
    return out;
  }

  std::string decode_string(const std::vector<int>& tokens) const {
    std::string out;
    out.reserve(tokens.size());
    for (int id : tokens) out.push_back(id_to_char(id));
    return out;
  }

 private:
  std::string chars_;
};

}  // namespace aaekit::asr

#endif  // AAEKIT_ASR_VOCAB_HPP_

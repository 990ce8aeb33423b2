// src/asr/manifest.cc

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

#include "aaekit/asr/manifest.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "aaekit/common/error.hpp"

namespace aaekit::asr {

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream is(path);
  require(is.is_open(), ErrorCode::kNotFound, "manifest not found: " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::kDataError,
           "bad manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    require(j.contains("id") && j.contains("audio_path") && j.contains("transcript"),
            ErrorCode::kDataError,
            "manifest line " + std::to_string(line_no) + " missing a required field");
    ManifestEntry e;
    e.id = j.at("id").get<std::string>();
    e.transcript = j.at("transcript").get<std::string>();
    std::filesystem::path ap = j.at("audio_path").get<std::string>();
    e.audio_path = ap.is_absolute() ? ap.string() : (base / ap).string();
    out.push_back(std::move(e));
  }
  require(!out.empty(), ErrorCode::kDataError, "manifest has no entries: " + path);
  return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream os(path);
  require(os.is_open(), ErrorCode::kIoError, "cannot open manifest for writing: " + path);
  for (const ManifestEntry& e : entries) {
    nlohmann::json j;
    j["id"] = e.id;
    j["audio_path"] = e.audio_path;
    j["transcript"] = e.transcript;
    os << j.dump() << '\n';
  }
  require(static_cast<bool>(os), ErrorCode::kIoError, "short manifest write: " + path);
}

}  // namespace aaekit::asr

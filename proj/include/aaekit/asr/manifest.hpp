// include/aaekit/asr/manifest.hpp

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

#ifndef AAEKIT_ASR_MANIFEST_HPP_
#define AAEKIT_ASR_MANIFEST_HPP_

#include <string>
#include <vector>

namespace aaekit::asr {

struct ManifestEntry {
  std::string id;
  std::string audio_path;  // resolved to an absolute-ish path on read
  std::string transcript;
};

// JSON-lines corpus manifest: one {"id", "audio_path", "transcript"} object
// per line. Relative audio paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::string& path);

// Writes audio paths exactly as given; callers keep them relative to the
// manifest directory for relocatable corpora.
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

}  // namespace aaekit::asr

#endif  // AAEKIT_ASR_MANIFEST_HPP_

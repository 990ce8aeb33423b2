// include/aaekit/asr/synth.hpp

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

#ifndef AAEKIT_ASR_SYNTH_HPP_
#define AAEKIT_ASR_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aaekit/audio/wave.hpp"
#include "aaekit/asr/vocab.hpp"

namespace aaekit::asr {

// Dual-tone synthetic speech: each of the 12 characters maps to a unique
// pair of frequencies from an 8-step, 400 Hz-spaced grid starting at 520 Hz,
// rendered with amplitude jitter, edge ramps, a bed-only gap after every
// character, and a Gaussian bed under the whole utterance.
struct SynthSpec {
  int n_utts = 100;
  std::uint64_t seed = 0;
  int min_len = 5;
  int max_len = 20;
  int sample_rate_hz = audio::kDefaultSampleRate;
  double char_dur_s = 0.07;
  double gap_s = 0.04;  // bed-only pause after each character
  double amp_jitter_db = 4.0;
  double background_snr_db = 8.0;  // bed sits this far below the tones
  std::string chars = "abcdefghijkl";
};

struct SynthUtterance {
  std::string id;
  audio::Waveform audio;
  std::string transcript;
};

// Renders one transcript deterministically from its seed.
audio::Waveform synth_utterance(const std::string& transcript, const SynthSpec& spec,
                                std::uint64_t seed);

// n_utts utterances with uniform random transcript lengths in
// [min_len, max_len]; ids are "<prefix>_%04d".
std::vector<SynthUtterance> synth_corpus(const SynthSpec& spec, const std::string& id_prefix);

}  // namespace aaekit::asr

#endif  // AAEKIT_ASR_SYNTH_HPP_

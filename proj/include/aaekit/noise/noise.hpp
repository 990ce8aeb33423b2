// include/aaekit/noise/noise.hpp

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

#ifndef AAEKIT_NOISE_NOISE_HPP_
#define AAEKIT_NOISE_NOISE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aaekit/audio/wave.hpp"

namespace aaekit::noise {

enum class NoiseKind { kWhite, kPink, kBrown, kBabble };

const char* noise_kind_name(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kWhite;
  double snr_db = 30.0;
  std::uint64_t seed = 0;
  std::vector<std::string> babble_sources;  // babble only, >= 3 paths
};

// Unit-RMS noise of the requested color. White is i.i.d. Gaussian; pink is
// white shaped to -3 dB/octave by a 3-pole/3-zero filter; brown is a
// mean-removed running sum of white; babble sums >= 3 sources at random
// circular offsets with equal gains. Deterministic in (kind, length, seed).
audio::Waveform gen_noise(NoiseKind kind, std::size_t length, std::uint64_t seed,
                          const std::vector<audio::Waveform>& babble_sources = {},
                          int sample_rate_hz = audio::kDefaultSampleRate);

// speech + g*noise with g solving 10*log10(P_speech / P_{g*noise}) = snr_db,
// powers taken over the full utterance. Noise must cover the speech length.
audio::Waveform mix_at_snr(const audio::Waveform& speech, const audio::Waveform& noise,
                           double snr_db);

}  // namespace aaekit::noise

#endif  // AAEKIT_NOISE_NOISE_HPP_

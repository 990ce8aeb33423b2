// include/aaekit/audio/wave.hpp

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

#ifndef AAEKIT_AUDIO_WAVE_HPP_
#define AAEKIT_AUDIO_WAVE_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace aaekit::audio {

constexpr int kDefaultSampleRate = 16000;

/// Mono audio in [-1, 1]. Immutable by convention once constructed; the
/// processing stages always return fresh Waveform values.
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
};

/// Reads a RIFF/WAVE file. Only PCM 16-bit mono is accepted; samples are
/// scaled to [-1, 1] by dividing by 32768.
Waveform read_wav(const std::filesystem::path& path);

/// Writes PCM 16-bit mono, little-endian. Samples are clipped to
/// [-1, 1 - 1/32768] before quantization.
void write_wav(const Waveform& w, const std::filesystem::path& path);

/// out[i] = a[i] + gain_b * b[i], length len(a); b must be at least as long.
Waveform mix_scaled(const Waveform& a, const Waveform& b, double gain_b);

/// Mean squared amplitude.
double power(std::span<const double> samples);

double power(const Waveform& w);

}  // namespace aaekit::audio

#endif  // AAEKIT_AUDIO_WAVE_HPP_

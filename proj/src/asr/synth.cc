// src/asr/synth.cc

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

#include "aaekit/asr/synth.hpp"

#include <cmath>
#include <cstdio>

#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"

namespace aaekit::asr {

namespace {

// 12 distinct tone pairs over the 8-frequency grid; every grid frequency
// appears three times so no single tone identifies a character.
constexpr int kTonePairs[12][2] = {{0, 4}, {1, 5}, {2, 6}, {3, 7}, {0, 2}, {1, 3},
                                   {4, 6}, {5, 7}, {0, 6}, {1, 7}, {2, 4}, {3, 5}};
// Grid frequencies sit on multiples of 40 Hz, the analysis bin width at the
// default frame length, so every tone lands on an exact FFT bin.
constexpr double kGridLoHz = 520.0;
constexpr double kGridStepHz = 400.0;

double grid_freq(int idx) { return kGridLoHz + kGridStepHz * idx; }

}  // namespace

audio::Waveform synth_utterance(const std::string& transcript, const SynthSpec& spec,
                                std::uint64_t seed) {
  require(!transcript.empty(), ErrorCode::kInvalidArgument, "empty transcript");
  require(spec.chars.size() <= 12, ErrorCode::kInvalidConfig,
          "tone table supports at most 12 characters");
  require(spec.char_dur_s > 0.0 && spec.gap_s >= 0.0, ErrorCode::kInvalidConfig,
          "char_dur_s must be positive and gap_s nonnegative");

  Rng rng(seed);
  const int sr = spec.sample_rate_hz;
  const std::size_t char_len = static_cast<std::size_t>(std::lround(spec.char_dur_s * sr));
  const std::size_t slot_len =
      char_len + static_cast<std::size_t>(std::lround(spec.gap_s * sr));
  const std::size_t ramp = static_cast<std::size_t>(std::lround(0.002 * sr));
  const std::size_t total = slot_len * transcript.size();

  audio::Waveform w;
  w.sample_rate_hz = sr;
  w.samples.assign(total, 0.0);

  for (std::size_t ci = 0; ci < transcript.size(); ++ci) {
    auto pos = spec.chars.find(transcript[ci]);
    require(pos != std::string::npos, ErrorCode::kDataError,
            std::string("transcript character outside alphabet: ") + transcript[ci]);
    const double f1 = grid_freq(kTonePairs[pos][0]);
    const double f2 = grid_freq(kTonePairs[pos][1]);
    const double jitter_db = rng.uniform(-spec.amp_jitter_db, spec.amp_jitter_db);
    const double amp = 0.35 * std::pow(10.0, jitter_db / 20.0);

    double* dst = w.samples.data() + ci * slot_len;
    for (std::size_t i = 0; i < char_len; ++i) {
      double tsec = static_cast<double>(i) / sr;
      double v = amp * (std::sin(2.0 * M_PI * f1 * tsec) + std::sin(2.0 * M_PI * f2 * tsec));
      if (i < ramp) v *= 0.5 * (1.0 - std::cos(M_PI * i / ramp));
      if (i >= char_len - ramp) {
        std::size_t k = char_len - 1 - i;
        v *= 0.5 * (1.0 - std::cos(M_PI * k / ramp));
      }
      dst[i] = v;
    }
  }

  double sig_rms = std::sqrt(audio::power(w));
  double bed_rms = sig_rms * std::pow(10.0, -spec.background_snr_db / 20.0);
  for (double& v : w.samples) v += bed_rms * rng.gaussian();

  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.97) {
    double g = 0.97 / peak;
    for (double& v : w.samples) v *= g;
  }
  return w;
}

std::vector<SynthUtterance> synth_corpus(const SynthSpec& spec, const std::string& id_prefix) {
  require(spec.n_utts >= 1, ErrorCode::kInvalidConfig, "n_utts must be positive");
  require(spec.min_len >= 1 && spec.min_len <= spec.max_len, ErrorCode::kInvalidConfig,
          "bad transcript length range");

  std::vector<SynthUtterance> out;
  out.reserve(static_cast<std::size_t>(spec.n_utts));
  for (int i = 0; i < spec.n_utts; ++i) {
    std::uint64_t utt_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i));
    Rng rng(derive_seed(utt_seed, 0x74657874));
    int len = static_cast<int>(rng.uniform_int(spec.min_len, spec.max_len));
    std::string transcript;
    transcript.reserve(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) {
      transcript.push_back(spec.chars[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(spec.chars.size()) - 1))]);
    }

    SynthUtterance u;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%04d", id_prefix.c_str(), i);
    u.id = buf;
    u.transcript = transcript;
    u.audio = synth_utterance(transcript, spec, derive_seed(utt_seed, 0x61756469));
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace aaekit::asr

// src/noise/noise.cc

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

#include "aaekit/noise/noise.hpp"

#include <cmath>
#include <numeric>

#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"

namespace aaekit::noise {

const char* noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
    case NoiseKind::kBrown: return "brown";
    case NoiseKind::kBabble: return "babble";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "white") return NoiseKind::kWhite;
  if (name == "pink") return NoiseKind::kPink;
  if (name == "brown") return NoiseKind::kBrown;
  if (name == "babble") return NoiseKind::kBabble;
  fail(ErrorCode::kInvalidArgument, "unknown noise kind: " + name);
}

namespace {

void normalize_rms(std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p += v * v;
  p /= static_cast<double>(x.size());
  require(p > 0.0, ErrorCode::kZeroPowerInput, "noise has zero power");
  double g = 1.0 / std::sqrt(p);
  for (double& v : x) v *= g;
}

std::vector<double> white_samples(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.gaussian();
  return x;
}

// 1/f shaping filter, direct form II transposed. Classic third-order fit to
// the -3 dB/octave target over the audio band.
std::vector<double> pink_filter(const std::vector<double>& w) {
  static constexpr double kB[4] = {0.049922035, -0.095993537, 0.050612699, -0.004408786};
  static constexpr double kA[4] = {1.0, -2.494956002, 2.017265875, -0.522189400};
  std::vector<double> y(w.size());
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double out = kB[0] * w[i] + s1;
    s1 = kB[1] * w[i] - kA[1] * out + s2;
    s2 = kB[2] * w[i] - kA[2] * out + s3;
    s3 = kB[3] * w[i] - kA[3] * out;
    y[i] = out;
  }
  return y;
}

}  // namespace

audio::Waveform gen_noise(NoiseKind kind, std::size_t length, std::uint64_t seed,
                          const std::vector<audio::Waveform>& babble_sources,
                          int sample_rate_hz) {
  require(length > 0, ErrorCode::kInvalidArgument, "noise length must be positive");

  audio::Waveform out;
  out.sample_rate_hz = sample_rate_hz;
  switch (kind) {
    case NoiseKind::kWhite: {
      out.samples = white_samples(length, seed);
      break;
    }
    case NoiseKind::kPink: {
      // Extra leading samples let the filter transient die out.
      const std::size_t warmup = 5000;
      std::vector<double> w = white_samples(length + warmup, seed);
      std::vector<double> y = pink_filter(w);
      out.samples.assign(y.begin() + warmup, y.end());
      break;
    }
    case NoiseKind::kBrown: {
      std::vector<double> w = white_samples(length, seed);
      std::partial_sum(w.begin(), w.end(), w.begin());
      double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(length);
      for (double& v : w) v -= mean;
      out.samples = std::move(w);
      break;
    }
    case NoiseKind::kBabble: {
      require(babble_sources.size() >= 3, ErrorCode::kInsufficientBabbleSources,
              "babble needs at least 3 source utterances");
      Rng rng(seed);
      out.samples.assign(length, 0.0);
      for (const audio::Waveform& src : babble_sources) {
        require(src.size() > 0, ErrorCode::kEmptyInput, "empty babble source");
        require(src.sample_rate_hz == sample_rate_hz, ErrorCode::kRateMismatch,
                "babble source rate differs");
        std::size_t offset = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(src.size()) - 1));
        for (std::size_t i = 0; i < length; ++i) {
          out.samples[i] += src.samples[(offset + i) % src.size()];
        }
      }
      break;
    }
  }
  normalize_rms(out.samples);
  return out;
}

audio::Waveform mix_at_snr(const audio::Waveform& speech, const audio::Waveform& noise,
                           double snr_db) {
  require(speech.sample_rate_hz == noise.sample_rate_hz, ErrorCode::kRateMismatch,
          "sample rates differ");
  require(noise.size() >= speech.size(), ErrorCode::kLengthMismatch,
          "noise shorter than speech");
  double p_s = audio::power(speech);
  double p_n = 0.0;
  for (std::size_t i = 0; i < speech.size(); ++i) p_n += noise.samples[i] * noise.samples[i];
  p_n /= static_cast<double>(speech.size());
  require(p_s > 0.0, ErrorCode::kZeroPowerInput, "speech has zero power");
  require(p_n > 0.0, ErrorCode::kZeroPowerInput, "noise has zero power");

  double g = std::sqrt(p_s / (p_n * std::pow(10.0, snr_db / 10.0)));
  audio::Waveform out;
  out.sample_rate_hz = speech.sample_rate_hz;
  out.samples.resize(speech.size());
  for (std::size_t i = 0; i < speech.size(); ++i) {
    out.samples[i] = speech.samples[i] + g * noise.samples[i];
  }
  return out;
}

}  // namespace aaekit::noise

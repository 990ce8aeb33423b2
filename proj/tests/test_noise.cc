// tests/test_noise.cc

// Copyright 2026 The aaekit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "aaekit/audio/wave.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/feat/fft.hpp"
#include "aaekit/noise/noise.hpp"

using namespace aaekit;

namespace {

double rms(const audio::Waveform& w) { return std::sqrt(audio::power(w)); }

// Mean per-bin power (dB) inside each octave [lo, 2*lo), via an averaged
// 1024-point periodogram. Per-bin means make the expected octave-to-octave
// slope equal the PSD slope: 0 dB white, -3 dB pink, -6 dB brown.
std::vector<double> octave_band_db(const std::vector<double>& x, int sr,
                                   const std::vector<double>& octave_lo_hz) {
  const int n = 1024;
  feat::RealFft fft(n);
  std::vector<double> psd(static_cast<std::size_t>(n / 2 + 1), 0.0);
  std::vector<double> seg(n);
  std::vector<std::complex<double>> spec;
  int count = 0;
  for (std::size_t start = 0; start + n <= x.size(); start += n) {
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(start),
              x.begin() + static_cast<std::ptrdiff_t>(start) + n, seg.begin());
    fft.forward(seg, spec);
    for (int k = 0; k <= n / 2; ++k) psd[static_cast<std::size_t>(k)] += std::norm(spec[k]);
    ++count;
  }
  REQUIRE(count > 100);
  const double bin_hz = static_cast<double>(sr) / n;
  std::vector<double> out;
  for (double lo : octave_lo_hz) {
    double p = 0.0;
    int nb = 0;
    for (int k = 1; k <= n / 2; ++k) {
      const double f = k * bin_hz;
      if (f >= lo && f < 2.0 * lo) {
        p += psd[static_cast<std::size_t>(k)];
        ++nb;
      }
    }
    REQUIRE(nb > 0);
    out.push_back(10.0 * std::log10(p / (static_cast<double>(count) * nb)));
  }
  return out;
}

// Least-squares slope of y against octave index 0, 1, 2, ...
double octave_slope_db(const std::vector<double>& band_db) {
  const double n = static_cast<double>(band_db.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < band_db.size(); ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += band_db[i];
    sxx += x * x;
    sxy += x * band_db[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

audio::Waveform sine(double freq, std::size_t len, int sr = audio::kDefaultSampleRate) {
  audio::Waveform w;
  w.sample_rate_hz = sr;
  w.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    w.samples[i] = 0.5 * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / sr);
  }
  return w;
}

std::vector<audio::Waveform> three_sources() {
  return {sine(311.0, 16000), sine(547.0, 12000), sine(723.0, 20000)};
}

}  // namespace

TEST_CASE("noise kind names round trip") {
  for (noise::NoiseKind k : {noise::NoiseKind::kWhite, noise::NoiseKind::kPink,
                             noise::NoiseKind::kBrown, noise::NoiseKind::kBabble}) {
    CHECK(noise::parse_noise_kind(noise::noise_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(noise::parse_noise_kind("mauve"), Error);
}

TEST_CASE("every color comes out at unit RMS and is seed-deterministic") {
  const auto sources = three_sources();
  for (noise::NoiseKind k : {noise::NoiseKind::kWhite, noise::NoiseKind::kPink,
                             noise::NoiseKind::kBrown, noise::NoiseKind::kBabble}) {
    const audio::Waveform a = noise::gen_noise(k, 8000, 42, sources);
    CHECK(a.size() == 8000);
    CHECK(rms(a) == doctest::Approx(1.0).epsilon(1e-9));

    const audio::Waveform b = noise::gen_noise(k, 8000, 42, sources);
    CHECK(a.samples == b.samples);
    const audio::Waveform c = noise::gen_noise(k, 8000, 43, sources);
    CHECK(a.samples != c.samples);
  }
  CHECK_THROWS_AS(noise::gen_noise(noise::NoiseKind::kWhite, 0, 1), Error);
}

TEST_CASE("spectral slope per color: white 0, pink -3, brown -6 dB per octave") {
  const std::size_t n = 1u << 18;
  const std::vector<double> octaves = {125.0, 250.0, 500.0, 1000.0, 2000.0};

  const auto white = noise::gen_noise(noise::NoiseKind::kWhite, n, 9);
  CHECK(std::abs(octave_slope_db(octave_band_db(white.samples, 16000, octaves))) < 0.5);

  const auto pink = noise::gen_noise(noise::NoiseKind::kPink, n, 9);
  CHECK(octave_slope_db(octave_band_db(pink.samples, 16000, octaves)) ==
        doctest::Approx(-3.0).epsilon(0.25));

  const auto brown = noise::gen_noise(noise::NoiseKind::kBrown, n, 9);
  CHECK(octave_slope_db(octave_band_db(brown.samples, 16000, octaves)) ==
        doctest::Approx(-6.0).epsilon(0.2));
}

TEST_CASE("mix_at_snr hits the requested ratio within 0.01 dB") {
  const audio::Waveform speech = sine(440.0, 16000);
  const audio::Waveform noise_w = noise::gen_noise(noise::NoiseKind::kPink, 20000, 5);

  for (double target : {30.0, 10.0, 0.0, -10.0}) {
    const audio::Waveform mixed = noise::mix_at_snr(speech, noise_w, target);
    REQUIRE(mixed.size() == speech.size());
    double p_s = 0.0, p_n = 0.0;
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      const double n_i = mixed.samples[i] - speech.samples[i];
      p_s += speech.samples[i] * speech.samples[i];
      p_n += n_i * n_i;
    }
    const double measured = 10.0 * std::log10(p_s / p_n);
    CHECK(std::abs(measured - target) < 0.01);
  }
}

TEST_CASE("mix_at_snr input validation") {
  const audio::Waveform speech = sine(440.0, 16000);
  const audio::Waveform ok = noise::gen_noise(noise::NoiseKind::kWhite, 16000, 1);

  audio::Waveform short_noise = ok;
  short_noise.samples.resize(100);
  CHECK_THROWS_AS(noise::mix_at_snr(speech, short_noise, 10.0), Error);

  audio::Waveform slow = ok;
  slow.sample_rate_hz = 8000;
  CHECK_THROWS_AS(noise::mix_at_snr(speech, slow, 10.0), Error);

  audio::Waveform silence;
  silence.samples.assign(16000, 0.0);
  CHECK_THROWS_AS(noise::mix_at_snr(silence, ok, 10.0), Error);
  CHECK_THROWS_AS(noise::mix_at_snr(speech, silence, 10.0), Error);
}

TEST_CASE("babble needs three sources at the right rate") {
  const auto sources = three_sources();
  CHECK_THROWS_AS(
      noise::gen_noise(noise::NoiseKind::kBabble, 4000, 1, {sources[0], sources[1]}), Error);

  auto mixed_rates = sources;
  mixed_rates[2].sample_rate_hz = 8000;
  CHECK_THROWS_AS(noise::gen_noise(noise::NoiseKind::kBabble, 4000, 1, mixed_rates), Error);

  auto with_empty = sources;
  with_empty[1].samples.clear();
  CHECK_THROWS_AS(noise::gen_noise(noise::NoiseKind::kBabble, 4000, 1, with_empty), Error);

  // offsets wrap circularly, so the mix can outlast every source
  const audio::Waveform long_mix = noise::gen_noise(noise::NoiseKind::kBabble, 50000, 4, sources);
  CHECK(long_mix.size() == 50000);
  CHECK(rms(long_mix) == doctest::Approx(1.0).epsilon(1e-9));
}

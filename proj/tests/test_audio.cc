// tests/test_audio.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "aaekit/audio/wave.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"

using namespace aaekit;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("wav roundtrip stays within one quantization step") {
  Rng rng(42);
  audio::Waveform w;
  w.sample_rate_hz = 16000;
  for (int i = 0; i < 4321; ++i) w.samples.push_back(rng.uniform(-0.99, 0.99));

  const std::string path = temp_path("aaekit_test_rt.wav");
  audio::write_wav(w, path);
  const audio::Waveform r = audio::read_wav(path);

  REQUIRE(r.samples.size() == w.samples.size());
  CHECK(r.sample_rate_hz == 16000);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(std::abs(r.samples[i] - w.samples[i]) <= 0.5 / 32768.0 + 1e-12);
  }
  std::remove(path.c_str());
}

TEST_CASE("write_wav clips out-of-range samples") {
  audio::Waveform w;
  w.samples = {2.0, -2.0, 0.25};
  const std::string path = temp_path("aaekit_test_clip.wav");
  audio::write_wav(w, path);
  const audio::Waveform r = audio::read_wav(path);
  CHECK(r.samples[0] == doctest::Approx(1.0 - 1.0 / 32768.0).epsilon(1e-9));
  CHECK(r.samples[1] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(r.samples[2] == doctest::Approx(0.25).epsilon(1e-3));
  std::remove(path.c_str());
}

TEST_CASE("read_wav rejects missing and malformed files") {
  CHECK_THROWS_AS(audio::read_wav("/nonexistent/nope.wav"), Error);
  try {
    audio::read_wav("/nonexistent/nope.wav");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotFound);
  }

  const std::string path = temp_path("aaekit_test_garbage.wav");
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("this is not a wav file at all, just text padding", f);
    std::fclose(f);
  }
  try {
    audio::read_wav(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedFormat);
  }
  std::remove(path.c_str());
}

TEST_CASE("non-finite samples are rejected on write") {
  audio::Waveform w;
  w.samples = {0.0, std::nan("")};
  CHECK_THROWS_AS(audio::write_wav(w, temp_path("aaekit_test_nan.wav")), Error);
}

TEST_CASE("mix_scaled adds a scaled copy") {
  audio::Waveform a, b;
  a.samples = {1.0, 2.0, 3.0};
  b.samples = {10.0, 20.0, 30.0, 40.0};
  const audio::Waveform m = audio::mix_scaled(a, b, 0.5);
  REQUIRE(m.samples.size() == 3);
  CHECK(m.samples[0] == doctest::Approx(6.0));
  CHECK(m.samples[1] == doctest::Approx(12.0));
  CHECK(m.samples[2] == doctest::Approx(18.0));
}

TEST_CASE("power is the mean squared amplitude") {
  audio::Waveform w;
  w.samples = {3.0, -4.0};
  CHECK(audio::power(w) == doctest::Approx(12.5));
}

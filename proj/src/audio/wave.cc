// src/audio/wave.cc

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

#include "aaekit/audio/wave.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "aaekit/common/error.hpp"

namespace aaekit::audio {

namespace {

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<unsigned char>& out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kNotFound, "cannot open " + path.string());

  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  require(bytes.size() >= 12, ErrorCode::kUnsupportedFormat, "file too small for RIFF header");
  require(std::memcmp(bytes.data(), "RIFF", 4) == 0 && std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          ErrorCode::kUnsupportedFormat, "not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  std::size_t data_off = 0, data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    uint32_t chunk_len = read_u32(hdr + 4);
    std::size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      require(body + 16 <= bytes.size(), ErrorCode::kUnsupportedFormat, "truncated fmt chunk");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_off = body;
      data_len = std::min<std::size_t>(chunk_len, bytes.size() - body);
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  require(have_fmt && data_off != 0, ErrorCode::kUnsupportedFormat, "missing fmt or data chunk");
  require(format == 1, ErrorCode::kUnsupportedFormat, "only PCM WAV is supported");
  require(channels == 1, ErrorCode::kUnsupportedFormat, "only mono WAV is supported");
  require(bits == 16, ErrorCode::kUnsupportedFormat, "only 16-bit WAV is supported");
  require(rate > 0, ErrorCode::kUnsupportedFormat, "invalid sample rate");

  Waveform w;
  w.sample_rate_hz = static_cast<int>(rate);
  std::size_t n = data_len / 2;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int16_t s = static_cast<int16_t>(read_u16(bytes.data() + data_off + 2 * i));
    w.samples[i] = s / 32768.0;
  }
  return w;
}

void write_wav(const Waveform& w, const std::filesystem::path& path) {
  constexpr double kMax = 1.0 - 1.0 / 32768.0;
  for (double s : w.samples) {
    require(std::isfinite(s), ErrorCode::kInvalidArgument, "non-finite sample");
  }

  std::vector<unsigned char> out;
  out.reserve(44 + 2 * w.samples.size());
  uint32_t data_bytes = static_cast<uint32_t>(2 * w.samples.size());
  uint32_t rate = static_cast<uint32_t>(w.sample_rate_hz);

  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 1);   // PCM
  put_u16(out, 1);   // mono
  put_u32(out, rate);
  put_u32(out, rate * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_bytes);

  for (double s : w.samples) {
    double clipped = std::clamp(s, -1.0, kMax);
    auto q = static_cast<int32_t>(std::lrint(clipped * 32768.0));
    q = std::clamp<int32_t>(q, -32768, 32767);
    put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }

  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::kIoError, "cannot open for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  require(f.good(), ErrorCode::kIoError, "short write: " + path.string());
}

Waveform mix_scaled(const Waveform& a, const Waveform& b, double gain_b) {
  require(a.sample_rate_hz == b.sample_rate_hz, ErrorCode::kRateMismatch,
          "sample rates differ in mix_scaled");
  require(b.size() >= a.size(), ErrorCode::kInvalidArgument,
          "second input must be at least as long as the first");
  Waveform out;
  out.sample_rate_hz = a.sample_rate_hz;
  out.samples.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.samples[i] = a.samples[i] + gain_b * b.samples[i];
  }
  return out;
}

double power(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

double power(const Waveform& w) { return power(std::span<const double>(w.samples)); }

}  // namespace aaekit::audio

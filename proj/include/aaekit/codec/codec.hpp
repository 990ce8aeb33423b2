// include/aaekit/codec/codec.hpp

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

#ifndef AAEKIT_CODEC_CODEC_HPP_
#define AAEKIT_CODEC_CODEC_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "aaekit/audio/wave.hpp"

namespace aaekit::codec {

enum class CodecKind { kExternalCommand, kBuiltinPerceptual };

// The builtin path is an MDCT codec with a Bark-band masking model: sine
// window, 50% overlap, coefficients above `bandwidth_hz` are zeroed (low
// bitrates buy coding headroom with a lowpass, like production encoders),
// coefficients below the per-band masking threshold are dropped, the
// `keep_coeffs` largest survivors are kept and uniformly quantized to
// `quant_levels` steps. It stands in for an external encoder in hermetic
// runs; no bitstream is emitted.
struct CodecSpec {
  CodecKind kind = CodecKind::kBuiltinPerceptual;
  std::string name = "mid";
  int bitrate_kbps = 64;
  std::string encode_template;  // e.g. "lame -b {bitrate} {in} {out}"
  std::string decode_template;  // e.g. "lame --decode {in} {out}"
  int frame_len = 512;
  int keep_coeffs = 64;
  int quant_levels = 512;
  double bandwidth_hz = 0.0;   // 0 keeps the full band
  double cull_boost_db = 0.0;  // raises the masking cull above its base level
  double ath_db = -90.0;       // hearing-floor proxy, relative to the peak coefficient

  void validate() const;
};

// "hi" | "mid" | "lo" (nominal 128/64/24 kbps stand-ins).
CodecSpec builtin_preset(const std::string& name);

// Encode + decode + alignment; output has the input's length and rate.
audio::Waveform roundtrip(const audio::Waveform& w, const CodecSpec& spec);

// Shifts `decoded` by the lag in [0, 4096] maximizing cross-correlation with
// `original`, then crops/zero-pads to the original length.
audio::Waveform align_decoded(const audio::Waveform& original, const audio::Waveform& decoded);

// Per-Bark-band masking threshold (energy units) for one frame of MDCT
// coefficient magnitudes: max(absolute-threshold proxy, strongest band energy
// spread at -25 dB/Bark and offset -16 dB).
Eigen::VectorXd mask_threshold(const Eigen::VectorXd& coeff_magnitudes, int sample_rate_hz);

double bark_scale(double f_hz);
std::vector<int> bark_band_map(int n_coeffs, int sample_rate_hz);

// True when the first word of the encode template resolves to an executable.
bool encoder_available(const CodecSpec& spec);

struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;
};

// Runs argv directly (no shell), discarding output; kills the child after
// timeout_s seconds.
CommandResult run_command(const std::vector<std::string>& argv, double timeout_s);

std::vector<std::string> render_template(const std::string& tmpl, const std::string& in_path,
                                         const std::string& out_path, int bitrate_kbps);

}  // namespace aaekit::codec

#endif  // AAEKIT_CODEC_CODEC_HPP_

// include/aaekit/feat/logmel.hpp

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

#ifndef AAEKIT_FEAT_LOGMEL_HPP_
#define AAEKIT_FEAT_LOGMEL_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "aaekit/audio/wave.hpp"

namespace aaekit::feat {

/// Front-end configuration: 25 ms periodic-Hann frames every 10 ms, 80 mel
/// bins over 0..8 kHz, power spectrogram, natural-log compression.
///
/// Emitted values are (ln(max(p, log_floor)) - log_offset) / log_scale. The
/// affine terms standardize the log energies to roughly zero mean and unit
/// variance so perturbation budgets are stated in a scale-free unit; the
/// inverse path undoes them exactly.
struct FeatureConfig {
  int n_fft = 400;
  int hop = 160;
  int n_mels = 80;
  double f_min_hz = 0.0;
  double f_max_hz = 8000.0;
  double log_floor = 1e-10;
  double log_offset = -2.0;
  double log_scale = 3.0;
  int gl_iters = 60;

  int n_bins() const { return n_fft / 2 + 1; }
  void validate(int sample_rate_hz) const;  // throws InvalidConfig
};

/// Triangular mel filters, one row per mel bin, n_fft/2+1 columns.
struct MelFilterbank {
  Eigen::MatrixXd weights;
};

/// Log-mel filterbank energies, one row per frame.
struct LogMelFeatures {
  Eigen::MatrixXd values;  // T x n_mels
  FeatureConfig config;
  std::size_t source_len = 0;
  int sample_rate_hz = audio::kDefaultSampleRate;

  Eigen::Index frames() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Number of analysis frames for a signal of `len` samples (len >= n_fft).
inline std::size_t frame_count(std::size_t len, const FeatureConfig& cfg) {
  return 1 + (len - static_cast<std::size_t>(cfg.n_fft)) / static_cast<std::size_t>(cfg.hop);
}

MelFilterbank mel_matrix(const FeatureConfig& cfg, int sample_rate_hz);

/// One-sided STFT, frame t covering samples [t*hop, t*hop + n_fft) under a
/// periodic Hann window. T x (n_fft/2+1).
Eigen::MatrixXcd stft(const audio::Waveform& w, const FeatureConfig& cfg);

LogMelFeatures extract_logmel(const audio::Waveform& w, const FeatureConfig& cfg);

/// Inverse path: de-standardize -> exp -> nonnegative mel inversion ->
/// Griffin-Lim -> trim/pad to source_len.
audio::Waveform invert_logmel(const LogMelFeatures& feats);

/// Recovers a nonnegative linear power spectrogram P (T x n_bins) with
/// P * weights^T ~= mel_power. Projected-gradient NNLS, warm-started from the
/// clamped pseudo-inverse solution; falls back to that projection if the
/// solver has not converged after max_iters sweeps.
Eigen::MatrixXd mel_to_power(const Eigen::MatrixXd& mel_power, const MelFilterbank& fb,
                             int max_iters = 200);

/// Griffin-Lim phase retrieval from a magnitude target (T x n_bins). Phases
/// start on each bin's own linear ramp so nearby targets land on aligned
/// waveforms. If err_history is given it receives the magnitude consistency
/// error after each iteration.
audio::Waveform griffin_lim(const Eigen::MatrixXd& target_mag, const FeatureConfig& cfg,
                            int sample_rate_hz, std::size_t out_len,
                            std::vector<double>* err_history = nullptr);

}  // namespace aaekit::feat

#endif  // AAEKIT_FEAT_LOGMEL_HPP_

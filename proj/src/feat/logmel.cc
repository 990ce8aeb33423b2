// src/feat/logmel.cc

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

#include "aaekit/feat/logmel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "aaekit/common/error.hpp"
#include "aaekit/feat/fft.hpp"

namespace aaekit::feat {

namespace {

std::vector<double> periodic_hann(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / n));
  }
  return w;
}

}  // namespace

void FeatureConfig::validate(int sample_rate_hz) const {
  require(n_fft > 0 && hop > 0 && hop <= n_fft, ErrorCode::kInvalidConfig,
          "need 0 < hop <= n_fft");
  require(n_mels >= 1, ErrorCode::kInvalidConfig, "n_mels must be >= 1");
  require(log_floor > 0.0, ErrorCode::kInvalidConfig, "log_floor must be positive");
  require(log_scale > 0.0 && std::isfinite(log_scale) && std::isfinite(log_offset),
          ErrorCode::kInvalidConfig, "log standardization must be finite with positive scale");
  require(f_min_hz >= 0.0 && f_min_hz < f_max_hz && f_max_hz <= sample_rate_hz / 2.0,
          ErrorCode::kInvalidConfig, "need 0 <= f_min < f_max <= nyquist");
  require(gl_iters >= 0, ErrorCode::kInvalidConfig, "gl_iters must be >= 0");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank mel_matrix(const FeatureConfig& cfg, int sample_rate_hz) {
  cfg.validate(sample_rate_hz);
  const int n_bins = cfg.n_bins();
  const double mel_lo = hz_to_mel(cfg.f_min_hz);
  const double mel_hi = hz_to_mel(cfg.f_max_hz);

  // n_mels triangles need n_mels + 2 equally spaced mel anchor points
  std::vector<double> anchors_hz(cfg.n_mels + 2);
  for (int m = 0; m < cfg.n_mels + 2; ++m) {
    anchors_hz[m] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * m / (cfg.n_mels + 1));
  }

  MelFilterbank fb;
  fb.weights = Eigen::MatrixXd::Zero(cfg.n_mels, n_bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    double left = anchors_hz[m], center = anchors_hz[m + 1], right = anchors_hz[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      double f = static_cast<double>(k) * sample_rate_hz / cfg.n_fft;
      if (f <= left || f >= right) continue;
      fb.weights(m, k) =
          f <= center ? (f - left) / (center - left) : (right - f) / (right - center);
    }
  }
  return fb;
}

Eigen::MatrixXcd stft(const audio::Waveform& w, const FeatureConfig& cfg) {
  cfg.validate(w.sample_rate_hz);
  require(w.size() >= static_cast<std::size_t>(cfg.n_fft), ErrorCode::kTooShort,
          "signal shorter than one analysis frame");

  const std::size_t t_frames = frame_count(w.size(), cfg);
  const std::vector<double> window = periodic_hann(cfg.n_fft);
  RealFft fft(cfg.n_fft);

  Eigen::MatrixXcd out(t_frames, cfg.n_bins());
  std::vector<double> frame(cfg.n_fft);
  std::vector<std::complex<double>> spec;
  for (std::size_t t = 0; t < t_frames; ++t) {
    const double* src = w.samples.data() + t * cfg.hop;
    for (int i = 0; i < cfg.n_fft; ++i) frame[i] = src[i] * window[i];
    fft.forward(frame, spec);
    for (int k = 0; k < cfg.n_bins(); ++k) out(t, k) = spec[k];
  }
  return out;
}

LogMelFeatures extract_logmel(const audio::Waveform& w, const FeatureConfig& cfg) {
  Eigen::MatrixXcd spec = stft(w, cfg);
  Eigen::MatrixXd pow_spec = spec.cwiseAbs2();
  MelFilterbank fb = mel_matrix(cfg, w.sample_rate_hz);

  LogMelFeatures feats;
  feats.config = cfg;
  feats.source_len = w.size();
  feats.sample_rate_hz = w.sample_rate_hz;
  feats.values = (((pow_spec * fb.weights.transpose()).cwiseMax(cfg.log_floor).array().log() -
                   cfg.log_offset) /
                  cfg.log_scale)
                     .matrix();
  return feats;
}

Eigen::MatrixXd mel_to_power(const Eigen::MatrixXd& mel_power, const MelFilterbank& fb,
                             int max_iters) {
  // Solve columns jointly: min ||W X - B||_F^2, X >= 0, with W = weights
  // (n_mels x n_bins), B = mel_power^T (n_mels x T), X = power^T.
  const Eigen::MatrixXd& weights = fb.weights;
  Eigen::MatrixXd b = mel_power.transpose();

  // Min-norm least-squares projection through the transpose, clamped at 0.
  Eigen::MatrixXd gram_small = weights * weights.transpose();
  gram_small.diagonal().array() += 1e-12;
  Eigen::LDLT<Eigen::MatrixXd> small_solver(gram_small);
  Eigen::MatrixXd pinv_proj = (weights.transpose() * small_solver.solve(b)).cwiseMax(0.0);

  Eigen::MatrixXd gram = weights.transpose() * weights;  // n_bins x n_bins
  // Lipschitz constant of the gradient via power iteration on the Gram matrix.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(gram.rows());
  for (int i = 0; i < 30; ++i) {
    v = gram * v;
    double n = v.norm();
    if (n <= 0.0) break;
    v /= n;
  }
  double lipschitz = std::max(v.dot(gram * v), 1e-12);
  double step = 1.0 / lipschitz;

  Eigen::MatrixXd wt_b = weights.transpose() * b;
  Eigen::MatrixXd x = pinv_proj;
  Eigen::MatrixXd y = x, x_prev = x;
  double momentum_t = 1.0;
  bool converged = false;
  for (int it = 0; it < max_iters; ++it) {
    x_prev = x;
    x = (y - step * (gram * y - wt_b)).cwiseMax(0.0);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_t * momentum_t));
    y = x + ((momentum_t - 1.0) / t_next) * (x - x_prev);
    momentum_t = t_next;
    double delta = (x - x_prev).norm();
    if (delta <= 1e-8 * std::max(1.0, x.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged && !x.allFinite()) x = pinv_proj;
  require(x.allFinite(), ErrorCode::kNumericalError, "mel inversion produced non-finite values");
  return x.transpose();
}

audio::Waveform griffin_lim(const Eigen::MatrixXd& target_mag, const FeatureConfig& cfg,
                            int sample_rate_hz, std::size_t out_len,
                            std::vector<double>* err_history) {
  const auto t_frames = target_mag.rows();
  const int n_bins = cfg.n_bins();
  require(target_mag.cols() == n_bins, ErrorCode::kInvalidArgument,
          "magnitude matrix has wrong number of bins");
  require(t_frames >= 1, ErrorCode::kInvalidArgument, "empty magnitude target");

  const std::size_t synth_len = static_cast<std::size_t>(t_frames - 1) * cfg.hop + cfg.n_fft;
  const std::vector<double> window = periodic_hann(cfg.n_fft);
  RealFft fft(cfg.n_fft);

  // Least-squares overlap-add denominator. Flooring it near the signal edges,
  // where the window taper leaves almost no energy, trades a few attenuated
  // samples for not amplifying rounding noise by 1/wsq.
  std::vector<double> wsq(synth_len, 0.0);
  for (Eigen::Index t = 0; t < t_frames; ++t) {
    for (int i = 0; i < cfg.n_fft; ++i) wsq[t * cfg.hop + i] += window[i] * window[i];
  }
  const double wsq_floor = 1e-2 * *std::max_element(wsq.begin(), wsq.end());

  // Initial phases advance linearly at each bin's center frequency. Steady
  // tones then start near a consistent solution, and two runs with nearby
  // magnitude targets converge to aligned waveforms instead of drifting to
  // arbitrary per-tone offsets.
  std::vector<std::complex<double>> spec(n_bins);
  std::vector<double> frame(cfg.n_fft);
  Eigen::MatrixXcd phased(t_frames, n_bins);
  for (Eigen::Index t = 0; t < t_frames; ++t) {
    for (int k = 0; k < n_bins; ++k) {
      const double phi = 2.0 * M_PI * k * cfg.hop * static_cast<double>(t) / cfg.n_fft;
      phased(t, k) = std::polar(target_mag(t, k), phi);
    }
  }

  auto synthesize = [&](const Eigen::MatrixXcd& spectra, std::vector<double>& out) {
    out.assign(synth_len, 0.0);
    for (Eigen::Index t = 0; t < t_frames; ++t) {
      for (int k = 0; k < n_bins; ++k) spec[k] = spectra(t, k);
      fft.inverse(spec, frame);
      double* dst = out.data() + t * cfg.hop;
      for (int i = 0; i < cfg.n_fft; ++i) dst[i] += window[i] * frame[i];
    }
    for (std::size_t i = 0; i < synth_len; ++i) {
      out[i] /= std::max(wsq[i], wsq_floor);
    }
  };

  std::vector<double> x;
  synthesize(phased, x);

  audio::Waveform wx;
  wx.sample_rate_hz = sample_rate_hz;
  std::vector<std::complex<double>> fr_spec;
  std::vector<double> fr(cfg.n_fft);
  for (int iter = 0; iter < cfg.gl_iters; ++iter) {
    // Re-analyze, record consistency error, snap magnitudes to the target.
    double err2 = 0.0;
    for (Eigen::Index t = 0; t < t_frames; ++t) {
      const double* src = x.data() + t * cfg.hop;
      for (int i = 0; i < cfg.n_fft; ++i) fr[i] = src[i] * window[i];
      fft.forward(fr, fr_spec);
      for (int k = 0; k < n_bins; ++k) {
        double mag = std::abs(fr_spec[k]);
        double diff = mag - target_mag(t, k);
        err2 += diff * diff;
        phased(t, k) = mag > 1e-300 ? std::complex<double>(fr_spec[k] / mag * target_mag(t, k))
                                    : std::complex<double>(target_mag(t, k), 0.0);
      }
    }
    if (err_history) err_history->push_back(std::sqrt(err2));
    synthesize(phased, x);
  }

  for (double s : x) {
    require(std::isfinite(s), ErrorCode::kNumericalError, "phase retrieval diverged");
  }
  x.resize(out_len, 0.0);  // trim or zero-pad to the requested length
  wx.samples = std::move(x);
  return wx;
}

audio::Waveform invert_logmel(const LogMelFeatures& feats) {
  const FeatureConfig& cfg = feats.config;
  cfg.validate(feats.sample_rate_hz);
  MelFilterbank fb = mel_matrix(cfg, feats.sample_rate_hz);

  Eigen::MatrixXd mel_power =
      (feats.values.array() * cfg.log_scale + cfg.log_offset).exp().matrix();
  Eigen::MatrixXd power_spec = mel_to_power(mel_power, fb);
  Eigen::MatrixXd mag = power_spec.cwiseMax(0.0).cwiseSqrt();
  return griffin_lim(mag, cfg, feats.sample_rate_hz, feats.source_len);
}

}  // namespace aaekit::feat

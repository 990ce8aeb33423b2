// tests/test_feat.cc

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
#include <vector>

#include "aaekit/asr/synth.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"
#include "aaekit/feat/logmel.hpp"
#include "aaekit/feat/matrix_io.hpp"

using namespace aaekit;

namespace {

audio::Waveform sine(double freq_hz, double dur_s, int rate = 16000) {
  audio::Waveform w;
  w.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(dur_s * rate);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples.push_back(std::sin(2.0 * M_PI * freq_hz * static_cast<double>(i) / rate));
  }
  return w;
}

audio::Waveform random_wave(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  audio::Waveform w;
  w.sample_rate_hz = 16000;
  for (std::size_t i = 0; i < n; ++i) w.samples.push_back(rng.uniform(-0.8, 0.8));
  return w;
}

}  // namespace

TEST_CASE("mel scale formula") {
  CHECK(feat::hz_to_mel(0.0) == 0.0);
  CHECK(feat::hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(feat::hz_to_mel(700.0) == doctest::Approx(781.18).epsilon(1e-4));
  for (double f : {13.0, 440.0, 3123.0, 7999.0}) {
    CHECK(feat::mel_to_hz(feat::hz_to_mel(f)) == doctest::Approx(f).epsilon(1e-10));
  }
}

TEST_CASE("mel filterbank rows are triangles that cover the band") {
  feat::FeatureConfig cfg;
  const feat::MelFilterbank fb = feat::mel_matrix(cfg, 16000);
  REQUIRE(fb.weights.rows() == 80);
  REQUIRE(fb.weights.cols() == 201);
  CHECK(fb.weights.minCoeff() >= 0.0);

  for (int m = 0; m < fb.weights.rows(); ++m) {
    const auto row = fb.weights.row(m);
    CHECK(row.maxCoeff() > 0.0);
    int peak = 0;
    row.maxCoeff(&peak);
    for (int k = 1; k <= peak; ++k) CHECK(row(k) >= row(k - 1) - 1e-12);
    for (int k = peak + 1; k < row.cols(); ++k) CHECK(row(k) <= row(k - 1) + 1e-12);
  }

  // every bin between the first and last filter centers has support
  int first_peak = 0, last_peak = 0;
  fb.weights.row(0).maxCoeff(&first_peak);
  fb.weights.row(fb.weights.rows() - 1).maxCoeff(&last_peak);
  const Eigen::VectorXd col_sums = fb.weights.colwise().sum();
  for (int k = first_peak; k <= last_peak; ++k) CHECK(col_sums(k) > 0.0);
}

TEST_CASE("stft frame geometry and edge cases") {
  feat::FeatureConfig cfg;

  audio::Waveform zero;
  zero.samples.assign(1600, 0.0);
  CHECK(feat::stft(zero, cfg).cwiseAbs().maxCoeff() == 0.0);

  audio::Waveform tiny;
  tiny.samples.assign(399, 0.1);
  try {
    feat::stft(tiny, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooShort);
  }

  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto len = static_cast<std::size_t>(rng.uniform_int(400, 30000));
    CHECK(feat::frame_count(len, cfg) == 1 + (len - 400) / 160);
  }
}

TEST_CASE("1 kHz sine peaks at bin 25") {
  feat::FeatureConfig cfg;
  const Eigen::MatrixXcd spec = feat::stft(sine(1000.0, 0.3), cfg);
  const Eigen::MatrixXd pow_spec = spec.cwiseAbs2();
  for (Eigen::Index t = 0; t < pow_spec.rows(); ++t) {
    int k = 0;
    pow_spec.row(t).maxCoeff(&k);
    CHECK(k == 25);
  }
}

TEST_CASE("one-sided spectrum satisfies Parseval against windowed energy") {
  feat::FeatureConfig cfg;
  const audio::Waveform w = random_wave(1200, 99);
  const Eigen::MatrixXcd spec = feat::stft(w, cfg);

  // independent window oracle
  std::vector<double> window(cfg.n_fft);
  for (int i = 0; i < cfg.n_fft; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / cfg.n_fft));
  }

  for (Eigen::Index t = 0; t < spec.rows(); ++t) {
    double energy = 0.0;
    for (int i = 0; i < cfg.n_fft; ++i) {
      const double s = w.samples[static_cast<std::size_t>(t) * cfg.hop + i] * window[i];
      energy += s * s;
    }
    // half-weight DC/Nyquist so the one-sided sum unfolds the full spectrum
    double spectral = 0.0;
    for (int k = 0; k < cfg.n_bins(); ++k) {
      const double c = (k == 0 || k == cfg.n_fft / 2) ? 0.5 : 1.0;
      spectral += c * std::norm(spec(t, k));
    }
    CHECK(spectral == doctest::Approx(energy * cfg.n_fft / 2.0).epsilon(1e-6));
  }
}

TEST_CASE("extract_logmel floor, scaling and shape") {
  feat::FeatureConfig cfg;

  // all-zero input pins every bin to the standardized log floor
  const double floor_val = (std::log(cfg.log_floor) - cfg.log_offset) / cfg.log_scale;
  audio::Waveform zero;
  zero.samples.assign(16000, 0.0);
  const feat::LogMelFeatures fz = feat::extract_logmel(zero, cfg);
  CHECK(fz.frames() == 98);
  CHECK(fz.dim() == 80);
  CHECK((fz.values.array() == floor_val).all());

  // doubling the amplitude adds log(4) in power, divided by the value scale
  const audio::Waveform w = random_wave(16000, 3);
  audio::Waveform w2 = w;
  for (double& s : w2.samples) s *= 2.0;
  const feat::LogMelFeatures f1 = feat::extract_logmel(w, cfg);
  const feat::LogMelFeatures f2 = feat::extract_logmel(w2, cfg);
  REQUIRE(f1.values.rows() == 98);
  for (Eigen::Index t = 0; t < f1.values.rows(); ++t) {
    for (Eigen::Index m = 0; m < f1.values.cols(); ++m) {
      if (f2.values(t, m) > floor_val + 1e-9) {
        CHECK(f2.values(t, m) - f1.values(t, m) ==
              doctest::Approx(std::log(4.0) / cfg.log_scale).epsilon(1e-6));
      }
    }
  }
  CHECK(f1.values.allFinite());
}

TEST_CASE("griffin-lim error history is monotone non-increasing") {
  feat::FeatureConfig cfg;
  cfg.gl_iters = 25;
  const audio::Waveform w = random_wave(4000, 17);
  const Eigen::MatrixXd mag = feat::stft(w, cfg).cwiseAbs();

  std::vector<double> errs;
  const audio::Waveform out = feat::griffin_lim(mag, cfg, 16000, w.samples.size(), &errs);
  REQUIRE(errs.size() == 25);
  CHECK(out.samples.size() == w.samples.size());
  for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] <= errs[k - 1] + 1e-9);
}

TEST_CASE("inversion recovers the dominant frequency") {
  feat::FeatureConfig cfg;
  const audio::Waveform src = sine(1000.0, 0.4);
  const feat::LogMelFeatures feats = feat::extract_logmel(src, cfg);
  const audio::Waveform recon = feat::invert_logmel(feats);
  REQUIRE(recon.samples.size() == src.samples.size());

  const Eigen::MatrixXd pow_spec = feat::stft(recon, cfg).cwiseAbs2();
  Eigen::VectorXd mean_pow = pow_spec.colwise().mean();
  int k = 0;
  mean_pow.maxCoeff(&k);
  CHECK(k >= 24);
  CHECK(k <= 26);
}

TEST_CASE("feature round trip through inversion is close") {
  feat::FeatureConfig cfg;
  asr::SynthSpec spec;
  const audio::Waveform utt = asr::synth_utterance("abcdefgh", spec, 11);
  const feat::LogMelFeatures ref = feat::extract_logmel(utt, cfg);
  const audio::Waveform recon = feat::invert_logmel(ref);
  const feat::LogMelFeatures again = feat::extract_logmel(recon, cfg);

  const double rel = (again.values - ref.values).norm() / ref.values.norm();
  CHECK(rel <= 0.1);
}

TEST_CASE("mel_to_power explains the mel energies it was given") {
  feat::FeatureConfig cfg;
  const feat::MelFilterbank fb = feat::mel_matrix(cfg, 16000);
  const audio::Waveform w = random_wave(2000, 23);
  const Eigen::MatrixXd pow_true = feat::stft(w, cfg).cwiseAbs2();
  const Eigen::MatrixXd mel = pow_true * fb.weights.transpose();

  const Eigen::MatrixXd pow_rec = feat::mel_to_power(mel, fb);
  CHECK(pow_rec.minCoeff() >= 0.0);
  const Eigen::MatrixXd mel_rec = pow_rec * fb.weights.transpose();
  CHECK((mel_rec - mel).norm() / mel.norm() <= 1e-3);
}

TEST_CASE("binary matrix files round trip at float precision") {
  Eigen::MatrixXd m(3, 5);
  Rng rng(8);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.gaussian() * 10.0;

  const std::string path =
      (std::filesystem::temp_directory_path() / "aaekit_test_mat.bin").string();
  feat::write_fmat(path, m);
  const Eigen::MatrixXd r = feat::read_fmat(path);
  REQUIRE(r.rows() == 3);
  REQUIRE(r.cols() == 5);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      CHECK(r(i, j) == doctest::Approx(m(i, j)).epsilon(1e-6));
      CHECK(r(i, j) == static_cast<double>(static_cast<float>(m(i, j))));
    }
  }
  std::remove(path.c_str());

  CHECK_THROWS_AS(feat::read_fmat("/nonexistent/m.bin"), Error);
}

// python/bindings.cc

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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aaekit/asr/model.hpp"
#include "aaekit/asr/synth.hpp"
#include "aaekit/asr/train.hpp"
#include "aaekit/attack/fgsm.hpp"
#include "aaekit/codec/codec.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/feat/logmel.hpp"
#include "aaekit/metrics/metrics.hpp"
#include "aaekit/noise/noise.hpp"

namespace py = pybind11;

namespace {

using namespace aaekit;

feat::LogMelFeatures wrap_features(const Eigen::MatrixXd& values, int sample_rate_hz) {
  feat::LogMelFeatures f;
  f.values = values;
  f.config.n_mels = static_cast<int>(values.cols());
  f.sample_rate_hz = sample_rate_hz;
  f.source_len = values.rows() > 0
                     ? static_cast<std::size_t>((values.rows() - 1) * f.config.hop) + f.config.n_fft
                     : 0;
  return f;
}

audio::Waveform wrap_audio(const std::vector<double>& samples, int sample_rate_hz) {
  audio::Waveform w;
  w.samples = samples;
  w.sample_rate_hz = sample_rate_hz;
  return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ASR adversarial-noise toolkit: features, attack, codec defense, metrics";

  py::register_exception<Error>(m, "ToolkitError");

  m.def(
      "cer", [](const std::string& ref, const std::string& hyp) { return metrics::cer(ref, hyp); },
      py::arg("reference"), py::arg("hypothesis"),
      "Character error rate: edit distance over reference length.");
  m.def(
      "levenshtein",
      [](const std::string& a, const std::string& b) { return metrics::levenshtein(a, b); },
      py::arg("a"), py::arg("b"));
  m.def(
      "snr_adv",
      [](const std::vector<double>& ref, const std::vector<double>& adv, int rate) {
        return metrics::snr_adv(wrap_audio(ref, rate), wrap_audio(adv, rate));
      },
      py::arg("reference"), py::arg("adversarial"), py::arg("sample_rate_hz") = 16000,
      "SNR (dB) of the difference signal relative to the reference, capped at +/-120.");
  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const metrics::KsResult r = metrics::ks_two_sample(a, b);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("a"), py::arg("b"), "Two-sample Kolmogorov-Smirnov test -> (D, p).");

  m.def(
      "synth_utterance",
      [](const std::string& transcript, std::uint64_t seed) {
        asr::SynthSpec spec;
        return asr::synth_utterance(transcript, spec, seed).samples;
      },
      py::arg("transcript"), py::arg("seed"),
      "Dual-tone synthetic speech for a transcript over chars a..l, 16 kHz.");

  m.def(
      "extract_logmel",
      [](const std::vector<double>& samples, int rate) -> Eigen::MatrixXd {
        feat::FeatureConfig cfg;
        return feat::extract_logmel(wrap_audio(samples, rate), cfg).values;
      },
      py::arg("samples"), py::arg("sample_rate_hz") = 16000,
      "Log-mel features, one row per 10 ms frame, 80 bands.");
  m.def(
      "invert_logmel",
      [](const Eigen::MatrixXd& values, int rate, std::size_t out_len, int gl_iters) {
        feat::LogMelFeatures f = wrap_features(values, rate);
        if (out_len > 0) f.source_len = out_len;
        if (gl_iters > 0) f.config.gl_iters = gl_iters;
        return feat::invert_logmel(f).samples;
      },
      py::arg("features"), py::arg("sample_rate_hz") = 16000, py::arg("out_len") = 0,
      py::arg("gl_iters") = 0, "Griffin-Lim inversion of log-mel features back to audio.");

  m.def(
      "gen_noise",
      [](const std::string& kind, std::size_t length, std::uint64_t seed,
         const std::vector<std::vector<double>>& babble_sources, int rate) {
        std::vector<audio::Waveform> bank;
        for (const auto& s : babble_sources) bank.push_back(wrap_audio(s, rate));
        return noise::gen_noise(noise::parse_noise_kind(kind), length, seed, bank, rate).samples;
      },
      py::arg("kind"), py::arg("length"), py::arg("seed"),
      py::arg("babble_sources") = std::vector<std::vector<double>>{},
      py::arg("sample_rate_hz") = 16000,
      "Unit-RMS noise: white | pink | brown | babble (babble needs >= 3 sources).");
  m.def(
      "mix_at_snr",
      [](const std::vector<double>& speech, const std::vector<double>& noise_samples,
         double snr_db, int rate) {
        return noise::mix_at_snr(wrap_audio(speech, rate), wrap_audio(noise_samples, rate), snr_db)
            .samples;
      },
      py::arg("speech"), py::arg("noise"), py::arg("snr_db"), py::arg("sample_rate_hz") = 16000);

  m.def(
      "codec_roundtrip",
      [](const std::vector<double>& samples, const std::string& preset, int rate) {
        return codec::roundtrip(wrap_audio(samples, rate), codec::builtin_preset(preset)).samples;
      },
      py::arg("samples"), py::arg("preset") = "mid", py::arg("sample_rate_hz") = 16000,
      "Round-trip through the builtin perceptual codec preset: hi | mid | lo.");

  py::class_<asr::AsrModel>(m, "Model",
                            "Hybrid CTC/attention toy ASR model over a fixed character set.")
      .def_static(
          "create",
          [](const std::string& chars, std::uint64_t seed) {
            return asr::AsrModel(asr::ModelConfig{}, asr::Vocabulary(chars), seed);
          },
          py::arg("chars") = "abcdefghijkl", py::arg("seed") = 0)
      .def_static("load", &asr::AsrModel::load, py::arg("path"))
      .def("save", &asr::AsrModel::save, py::arg("path"))
      .def(
          "decode",
          [](const asr::AsrModel& self, const Eigen::MatrixXd& values, int rate) {
            require(static_cast<int>(values.cols()) == self.config().n_mels,
                    ErrorCode::kInvalidArgument, "feature dim does not match the model");
            const asr::DecodeResult r = self.decode_greedy(wrap_features(values, rate));
            return py::make_tuple(self.vocab().decode_string(r.tokens), r.log_score);
          },
          py::arg("features"), py::arg("sample_rate_hz") = 16000,
          "Greedy decode -> (text, log_score).")
      .def(
          "loss",
          [](const asr::AsrModel& self, const Eigen::MatrixXd& values,
             const std::string& transcript, int rate) {
            return self.hybrid_loss(wrap_features(values, rate),
                                    self.vocab().encode(transcript));
          },
          py::arg("features"), py::arg("transcript"), py::arg("sample_rate_hz") = 16000)
      .def(
          "train",
          [](asr::AsrModel& self, const std::vector<std::pair<Eigen::MatrixXd, std::string>>& data,
             int epochs, double lr, int batch_size, double grad_clip, std::uint64_t seed,
             int rate) {
            std::vector<asr::TrainUtterance> utts;
            for (std::size_t i = 0; i < data.size(); ++i) {
              utts.push_back({"py_" + std::to_string(i), wrap_features(data[i].first, rate),
                              self.vocab().encode(data[i].second)});
            }
            asr::TrainConfig cfg;
            cfg.epochs = epochs;
            cfg.lr = lr;
            cfg.batch_size = batch_size;
            cfg.grad_clip = grad_clip;
            cfg.seed = seed;
            return asr::train(self, utts, cfg).epoch_loss;
          },
          py::arg("data"), py::arg("epochs") = 5, py::arg("lr") = 3e-3,
          py::arg("batch_size") = 8, py::arg("grad_clip") = 5.0, py::arg("seed") = 0,
          py::arg("sample_rate_hz") = 16000,
          "Adam training on (features, transcript) pairs -> per-epoch mean loss.")
      .def(
          "attack",
          [](const asr::AsrModel& self, const Eigen::MatrixXd& values, double epsilon,
             int window_len, int stride, const std::string& loss_kind, int rate) {
            attack::AttackConfig cfg;
            cfg.epsilon = epsilon;
            cfg.window_len = window_len;
            cfg.stride = stride;
            cfg.loss_kind = asr::parse_loss_kind(loss_kind);
            const attack::AdversarialRecord rec =
                attack::generate_adversarial(self, wrap_features(values, rate), cfg);
            return py::make_tuple(rec.adv_features.values,
                                  self.vocab().decode_string(rec.reference_decode));
          },
          py::arg("features"), py::arg("epsilon") = 0.3, py::arg("window_len") = 5,
          py::arg("stride") = 3, py::arg("loss_kind") = "attention-ce",
          py::arg("sample_rate_hz") = 16000,
          "Windowed FGSM on the features -> (adversarial features, clean decode).");
}

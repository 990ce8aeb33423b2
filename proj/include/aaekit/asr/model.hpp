// include/aaekit/asr/model.hpp

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

#ifndef AAEKIT_ASR_MODEL_HPP_
#define AAEKIT_ASR_MODEL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "aaekit/asr/tape.hpp"
#include "aaekit/asr/vocab.hpp"
#include "aaekit/feat/logmel.hpp"

namespace aaekit::asr {

// Encoder: two 1-D convolution layers over time (stride 2 then 1), tanh.
// Decoder: single GRU with location-aware attention (a small convolution over
// the previous step's attention weights feeds the scorer). Two heads share
// the encoder: a per-frame CTC projection and the attention decoder's output
// projection.
struct ModelConfig {
  int n_mels = 80;
  int enc_hidden = 64;
  int enc_kernel = 3;
  int dec_hidden = 64;
  int embed_dim = 16;
  int att_dim = 64;
  int att_conv_channels = 8;
  int att_conv_kernel = 15;
  double alpha = 0.3;  // CTC share of the hybrid loss; attention dominates
  int max_decode_len = 30;

  void validate() const;
};

struct DecodeResult {
  std::vector<int> tokens;  // character ids only, no blank/sos/eos
  double log_score = 0.0;
};

enum class LossKind { kAttentionCe, kHybrid };

LossKind parse_loss_kind(const std::string& name);
const char* loss_kind_name(LossKind kind);

// Named parameter tensors in fixed registration order.
struct ParamStore {
  std::vector<std::pair<std::string, Eigen::MatrixXd>> items;

  Eigen::MatrixXd& at(const std::string& name);
  const Eigen::MatrixXd& at(const std::string& name) const;
  std::size_t total_size() const;
};

// Teacher-forced differentiable graph for one utterance. `att_terms[l]` is
// the cross-entropy of predicting token y[l]; `att_eos_term` scores the stop
// symbol; `ctc_term` is the CTC negative log-likelihood of the full sequence.
struct LossGraph {
  std::unique_ptr<Tape> tape;
  Tape::Var input;  // n_mels x T leaf (features transposed)
  std::vector<Tape::Var> att_terms;
  Tape::Var att_eos_term;
  Tape::Var ctc_term;
  bool has_ctc = false;
  std::vector<std::pair<std::string, Tape::Var>> param_leaves;

  Tape::Var attention_nll() const;
  Tape::Var hybrid(double alpha) const;  // requires has_ctc
};

class AsrModel {
 public:
  AsrModel() = default;
  AsrModel(ModelConfig cfg, Vocabulary vocab, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  const Vocabulary& vocab() const { return vocab_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // Loss values (both are negative log-likelihoods).
  double hybrid_loss(const feat::LogMelFeatures& x, const std::vector<int>& y) const;
  double ctc_loss(const feat::LogMelFeatures& x, const std::vector<int>& y) const;
  double attention_loss(const feat::LogMelFeatures& x, const std::vector<int>& y) const;

  // Exact d(loss)/d(features), same T x F shape as x.values.
  Eigen::MatrixXd input_gradient(const feat::LogMelFeatures& x, const std::vector<int>& y,
                                 LossKind kind) const;

  // Full differentiable graph; used by training and the windowed attack.
  // Skipping the CTC node keeps attention-only losses usable on label
  // sequences too long for a CTC alignment.
  LossGraph build_loss_graph(const feat::LogMelFeatures& x, const std::vector<int>& y,
                             bool input_grad, bool param_grad, bool with_ctc = true) const;

  // Autoregressive argmax decode; blank and sos are masked out, eos stops.
  DecodeResult decode_greedy(const feat::LogMelFeatures& x, int max_decode_len = -1) const;

  std::size_t encoded_frames(std::size_t t_in) const;

  void save(const std::string& path) const;
  static AsrModel load(const std::string& path);

 private:
  void register_params(std::uint64_t seed);
  void check_targets(const std::vector<int>& y) const;
  Eigen::MatrixXd encode_plain(const Eigen::MatrixXd& x_ft) const;

  ModelConfig cfg_;
  Vocabulary vocab_;
  ParamStore params_;
};

}  // namespace aaekit::asr

#endif  // AAEKIT_ASR_MODEL_HPP_

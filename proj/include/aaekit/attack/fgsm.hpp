// include/aaekit/attack/fgsm.hpp

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

#ifndef AAEKIT_ATTACK_FGSM_HPP_
#define AAEKIT_ATTACK_FGSM_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "aaekit/asr/model.hpp"
#include "aaekit/feat/logmel.hpp"

namespace aaekit::attack {

struct AttackConfig {
  double epsilon = 0.3;
  int window_len = 5;  // labels per window
  int stride = 3;      // labels between window starts
  asr::LossKind loss_kind = asr::LossKind::kAttentionCe;

  void validate() const;
};

struct AdversarialRecord {
  std::string utt_id;
  feat::LogMelFeatures clean_features;
  Eigen::MatrixXd delta;
  feat::LogMelFeatures adv_features;
  std::vector<int> reference_decode;  // model's own decode of the clean input
  std::vector<int> ground_truth;
};

// Label windows [i*stride, i*stride+window_len) intersected with [0, L), for
// i = 0 .. ceil(L/stride)-1.
std::vector<std::pair<int, int>> label_windows(int label_len, const AttackConfig& cfg);

// Sum over windows of (gradient of the window-restricted loss) / (its own L1
// norm); zero-gradient windows contribute nothing. With the hybrid loss kind
// the full-sequence CTC term joins every window; the attention term is the
// part restricted to the window's labels.
Eigen::MatrixXd accumulate_windowed_gradient(const asr::AsrModel& m,
                                             const feat::LogMelFeatures& x,
                                             const std::vector<int>& reference,
                                             const AttackConfig& cfg);

// Elementwise epsilon * sign(g) with sign(0) = 0.
Eigen::MatrixXd fgsm_delta(const Eigen::MatrixXd& g, double epsilon);

// Full attack: greedy-decode the clean input for the reference labels (never
// the ground truth), accumulate windowed gradients, apply the signed step.
AdversarialRecord generate_adversarial(const asr::AsrModel& m, const feat::LogMelFeatures& x,
                                       const AttackConfig& cfg);

// Binary matrices (clean/delta/adv) plus a JSON sidecar with the transcript
// data and attack parameters, under `<dir>/<utt_id>.{clean,delta,adv,json}`.
void save_record(const AdversarialRecord& rec, const AttackConfig& cfg, const std::string& dir);
AdversarialRecord load_record(const std::string& dir, const std::string& utt_id);

}  // namespace aaekit::attack

#endif  // AAEKIT_ATTACK_FGSM_HPP_

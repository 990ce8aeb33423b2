// include/aaekit/pipeline/config.hpp

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

#ifndef AAEKIT_PIPELINE_CONFIG_HPP_
#define AAEKIT_PIPELINE_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aaekit/asr/model.hpp"
#include "aaekit/asr/train.hpp"
#include "aaekit/attack/fgsm.hpp"
#include "aaekit/codec/codec.hpp"
#include "aaekit/feat/logmel.hpp"

namespace aaekit::pipeline {

// Flat `key = value` experiment description. Unknown keys are rejected so
// typos fail loudly; the canonical serialization (sorted keys, fixed number
// formatting) feeds the config hash embedded in every report.
struct ExperimentConfig {
  std::uint64_t seed = 1234;
  std::string out_dir = "runs/default";
  int jobs = 1;

  int n_train = 140;
  int n_test = 40;
  int n_babble = 6;
  int min_len = 5;
  int max_len = 20;
  std::string chars = "abcdefghijkl";
  double char_dur_s = 0.07;
  double gap_s = 0.04;
  double amp_jitter_db = 4.0;
  double bed_snr_db = 8.0;  // background bed level below the tones

  feat::FeatureConfig feat;
  asr::ModelConfig model;
  asr::TrainConfig train;
  attack::AttackConfig attack;

  std::vector<std::string> levels = {"uncompressed", "hi", "mid", "lo"};
  std::string defense_level = "lo";
  std::string external_encode;  // non-empty pair switches to an external codec
  std::string external_decode;

  std::vector<std::string> noise_kinds = {"white", "pink", "brown", "babble"};
  std::vector<double> noise_snrs_db = {30.0, 10.0, 0.0, -10.0};

  void validate() const;

  // Codec used to produce compression level `name` ("uncompressed" has none).
  codec::CodecSpec level_codec(const std::string& name) const;
  codec::CodecSpec defense_codec() const;
  bool external() const { return !external_encode.empty(); }
};

ExperimentConfig default_config();
ExperimentConfig load_config(const std::string& path);

// Applies one `key = value` assignment (also used for CLI overrides).
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::string serialize_config(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);  // FNV-1a over the serialization

}  // namespace aaekit::pipeline

#endif  // AAEKIT_PIPELINE_CONFIG_HPP_

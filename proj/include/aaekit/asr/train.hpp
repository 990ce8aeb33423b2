// include/aaekit/asr/train.hpp

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

#ifndef AAEKIT_ASR_TRAIN_HPP_
#define AAEKIT_ASR_TRAIN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aaekit/asr/model.hpp"
#include "aaekit/feat/logmel.hpp"

namespace aaekit::asr {

struct TrainUtterance {
  std::string id;
  feat::LogMelFeatures feats;
  std::vector<int> tokens;
};

struct TrainConfig {
  int epochs = 30;
  double lr = 3e-3;
  int batch_size = 8;
  double grad_clip = 5.0;
  std::uint64_t seed = 0;
};

struct TrainLog {
  std::vector<double> epoch_loss;  // mean hybrid loss per epoch
};

// Adam on the hybrid loss with per-epoch seeded shuffling and gradient
// accumulation over mini-batches. Single-threaded and bit-deterministic for a
// fixed seed.
TrainLog train(AsrModel& model, const std::vector<TrainUtterance>& data, const TrainConfig& cfg);

}  // namespace aaekit::asr

#endif  // AAEKIT_ASR_TRAIN_HPP_

// src/asr/train.cc

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

#include "aaekit/asr/train.hpp"

#include <cmath>
#include <numeric>

#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"

namespace aaekit::asr {

TrainLog train(AsrModel& model, const std::vector<TrainUtterance>& data, const TrainConfig& cfg) {
  require(!data.empty(), ErrorCode::kDataError, "training corpus is empty");
  require(cfg.epochs >= 0 && cfg.batch_size >= 1 && cfg.lr > 0.0, ErrorCode::kInvalidConfig,
          "bad training parameters");
  for (const TrainUtterance& u : data) {
    require(!u.tokens.empty(), ErrorCode::kDataError, "utterance with empty transcript: " + u.id);
  }

  ParamStore& params = model.params();
  const std::size_t n_tensors = params.items.size();
  std::vector<Eigen::MatrixXd> grad(n_tensors), m1(n_tensors), m2(n_tensors);
  for (std::size_t i = 0; i < n_tensors; ++i) {
    const Eigen::MatrixXd& p = params.items[i].second;
    grad[i] = Eigen::MatrixXd::Zero(p.rows(), p.cols());
    m1[i] = grad[i];
    m2[i] = grad[i];
  }

  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long step = 0;
  const double alpha = model.config().alpha;

  TrainLog log;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch) + 1));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(
          shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }

    double epoch_loss = 0.0;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      const std::size_t batch_end =
          std::min(cursor + static_cast<std::size_t>(cfg.batch_size), order.size());
      const double inv_batch = 1.0 / static_cast<double>(batch_end - cursor);
      for (auto& g : grad) g.setZero();

      for (std::size_t b = cursor; b < batch_end; ++b) {
        const TrainUtterance& u = data[order[b]];
        LossGraph g = model.build_loss_graph(u.feats, u.tokens, false, true);
        Tape::Var root = g.hybrid(alpha);
        epoch_loss += g.tape->scalar(root);
        g.tape->backward(root);
        for (std::size_t i = 0; i < n_tensors; ++i) {
          grad[i] += g.tape->grad(g.param_leaves[i].second);
        }
      }

      double norm2 = 0.0;
      for (auto& g : grad) {
        g *= inv_batch;
        norm2 += g.squaredNorm();
      }
      double norm = std::sqrt(norm2);
      if (cfg.grad_clip > 0.0 && norm > cfg.grad_clip) {
        double scale = cfg.grad_clip / norm;
        for (auto& g : grad) g *= scale;
      }

      ++step;
      const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (std::size_t i = 0; i < n_tensors; ++i) {
        m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
        m2[i] = (beta2 * m2[i].array() + (1.0 - beta2) * grad[i].array().square()).matrix();
        params.items[i].second.array() -=
            cfg.lr * (m1[i].array() / bc1) / ((m2[i].array() / bc2).sqrt() + eps);
      }
      cursor = batch_end;
    }
    log.epoch_loss.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return log;
}

}  // namespace aaekit::asr

// include/aaekit/asr/tape.hpp

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

#ifndef AAEKIT_ASR_TAPE_HPP_
#define AAEKIT_ASR_TAPE_HPP_

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace aaekit::asr {

// Define-by-run reverse-mode differentiation over dense double matrices.
// Each operation appends a node holding the forward value and a closure that
// pushes adjoints to its parents. backward() may be called repeatedly with
// different roots on one recorded graph; gradients are reset on each call.
class Tape {
 public:
  struct Var {
    int idx = -1;
    bool valid() const { return idx >= 0; }
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Eigen::MatrixXd value, bool requires_grad = false);

  const Eigen::MatrixXd& value(Var v) const { return nodes_[v.idx].value; }
  double scalar(Var v) const { return nodes_[v.idx].value(0, 0); }

  // Zero matrix when the node never received an adjoint.
  Eigen::MatrixXd grad(Var v) const;

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);                          // same shape
  Var add_scaled(Var a, double ca, Var b, double cb);
  Var affine(Var a, double scale, double shift);  // scale*a + shift
  Var hadamard(Var a, Var b);
  Var tanh_op(Var a);
  Var sigmoid(Var a);
  Var transpose(Var a);
  Var broadcast_col_add(Var m, Var col);  // m.col(j) + col for every j
  Var softmax_col(Var a);                 // a: n x 1
  Var log_softmax_col(Var a);             // a: n x 1
  Var concat_rows(Var a, Var b);
  Var slice_col(Var a, int j);
  Var pick_neg(Var log_probs, int row);  // -log_probs(row, 0), a 1x1 scalar

  // x: in_ch x T; w: out_ch x (in_ch*kernel), taps ordered [tap0 | tap1 |...];
  // bias: out_ch x 1. Zero padding on both sides.
  Var conv1d(Var w, Var bias, Var x, int kernel, int stride, int pad);

  // logits: vocab x T. Negative log-probability of `targets` summed over all
  // blank-augmented alignments (forward algorithm in log space). Throws
  // SequenceTooLong when no alignment fits in T frames.
  Var ctc_nll(Var logits, const std::vector<int>& targets, int blank);

  // Clears all adjoints, seeds d(root)/d(root) = 1 and sweeps the tape in
  // reverse creation order. root must be 1x1.
  void backward(Var root);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Eigen::MatrixXd value;
    std::function<void(Tape&)> back;  // null for leaves/constants
    bool needs_grad = false;
  };

  Var push(Eigen::MatrixXd value, bool needs_grad, std::function<void(Tape&)> back);
  bool needs(Var v) const { return nodes_[v.idx].needs_grad; }
  void accum(int idx, const Eigen::MatrixXd& delta);
  const Eigen::MatrixXd& grad_ref(int idx) const { return grads_[idx]; }
  bool grad_set(int idx) const { return grads_[idx].size() > 0; }

  std::vector<Node> nodes_;
  std::vector<Eigen::MatrixXd> grads_;
};

}  // namespace aaekit::asr

#endif  // AAEKIT_ASR_TAPE_HPP_

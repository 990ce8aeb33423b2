// src/asr/tape.cc

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

#include "aaekit/asr/tape.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "aaekit/common/error.hpp"

namespace aaekit::asr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

Eigen::VectorXd softmax_vec(const Eigen::VectorXd& x) {
  Eigen::VectorXd e = (x.array() - x.maxCoeff()).exp();
  return e / e.sum();
}

}  // namespace

Tape::Var Tape::push(Eigen::MatrixXd value, bool needs_grad, std::function<void(Tape&)> back) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  if (needs_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  grads_.emplace_back();
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tape::Var Tape::leaf(Eigen::MatrixXd value, bool requires_grad) {
  return push(std::move(value), requires_grad, nullptr);
}

Eigen::MatrixXd Tape::grad(Var v) const {
  if (grad_set(v.idx)) return grads_[v.idx];
  return Eigen::MatrixXd::Zero(nodes_[v.idx].value.rows(), nodes_[v.idx].value.cols());
}

void Tape::accum(int idx, const Eigen::MatrixXd& delta) {
  if (!nodes_[idx].needs_grad) return;
  if (!grad_set(idx)) {
    grads_[idx] = delta;
  } else {
    grads_[idx] += delta;
  }
}

void Tape::backward(Var root) {
  require(root.valid() && nodes_[root.idx].value.size() == 1, ErrorCode::kInvalidArgument,
          "backward root must be a scalar node");
  for (auto& g : grads_) g.resize(0, 0);
  grads_[root.idx] = Eigen::MatrixXd::Ones(1, 1);
  for (int i = root.idx; i >= 0; --i) {
    if (!grad_set(i) || !nodes_[i].back) continue;
    nodes_[i].back(*this);
  }
}

Tape::Var Tape::matmul(Var a, Var b) {
  require(value(a).cols() == value(b).rows(), ErrorCode::kInvalidArgument,
          "matmul inner dimensions differ");
  Eigen::MatrixXd v = value(a) * value(b);
  int ia = a.idx, ib = b.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a) || needs(b), [ia, ib, self](Tape& t) {
    const Eigen::MatrixXd& g = t.grad_ref(self);
    t.accum(ia, g * t.nodes_[ib].value.transpose());
    t.accum(ib, t.nodes_[ia].value.transpose() * g);
  });
}

Tape::Var Tape::add(Var a, Var b) {
  require(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(),
          ErrorCode::kInvalidArgument, "add shapes differ");
  return add_scaled(a, 1.0, b, 1.0);
}

Tape::Var Tape::add_scaled(Var a, double ca, Var b, double cb) {
  Eigen::MatrixXd v = ca * value(a) + cb * value(b);
  int ia = a.idx, ib = b.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a) || needs(b), [ia, ib, ca, cb, self](Tape& t) {
    const Eigen::MatrixXd& g = t.grad_ref(self);
    t.accum(ia, ca * g);
    t.accum(ib, cb * g);
  });
}

Tape::Var Tape::affine(Var a, double scale, double shift) {
  Eigen::MatrixXd v = (scale * value(a)).array() + shift;
  int ia = a.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a), [ia, scale, self](Tape& t) {
    t.accum(ia, scale * t.grad_ref(self));
  });
}

Tape::Var Tape::hadamard(Var a, Var b) {
  require(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(),
          ErrorCode::kInvalidArgument, "hadamard shapes differ");
  Eigen::MatrixXd v = value(a).cwiseProduct(value(b));
  int ia = a.idx, ib = b.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a) || needs(b), [ia, ib, self](Tape& t) {
    const Eigen::MatrixXd& g = t.grad_ref(self);
    t.accum(ia, g.cwiseProduct(t.nodes_[ib].value));
    t.accum(ib, g.cwiseProduct(t.nodes_[ia].value));
  });
}

Tape::Var Tape::tanh_op(Var a) {
  Eigen::MatrixXd v = value(a).array().tanh();
  int ia = a.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a), [ia, self](Tape& t) {
    const Eigen::MatrixXd& y = t.nodes_[self].value;
    t.accum(ia, t.grad_ref(self).cwiseProduct(
                    (1.0 - y.array().square()).matrix()));
  });
}

Tape::Var Tape::sigmoid(Var a) {
  Eigen::MatrixXd v = (1.0 / (1.0 + (-value(a)).array().exp())).matrix();
  int ia = a.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a), [ia, self](Tape& t) {
    const Eigen::ArrayXXd y = t.nodes_[self].value.array();
    t.accum(ia, t.grad_ref(self).cwiseProduct((y * (1.0 - y)).matrix()));
  });
}

Tape::Var Tape::transpose(Var a) {
  Eigen::MatrixXd v = value(a).transpose();
  int ia = a.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a), [ia, self](Tape& t) {
    t.accum(ia, t.grad_ref(self).transpose());
  });
}

Tape::Var Tape::broadcast_col_add(Var m, Var col) {
  require(value(col).cols() == 1 && value(col).rows() == value(m).rows(),
          ErrorCode::kInvalidArgument, "broadcast column shape mismatch");
  Eigen::MatrixXd v = value(m).colwise() + Eigen::VectorXd(value(col).col(0));
  int im = m.idx, ic = col.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(m) || needs(col), [im, ic, self](Tape& t) {
    const Eigen::MatrixXd& g = t.grad_ref(self);
    t.accum(im, g);
    t.accum(ic, g.rowwise().sum());
  });
}

Tape::Var Tape::softmax_col(Var a) {
  require(value(a).cols() == 1, ErrorCode::kInvalidArgument, "softmax_col expects a column");
  Eigen::VectorXd s = softmax_vec(value(a).col(0));
  int ia = a.idx;
  int self = static_cast<int>(nodes_.size());
  return push(s, needs(a), [ia, self](Tape& t) {
    const Eigen::VectorXd y = t.nodes_[self].value.col(0);
    const Eigen::VectorXd g = t.grad_ref(self).col(0);
    double dot = y.dot(g);
    t.accum(ia, (y.array() * (g.array() - dot)).matrix());
  });
}

Tape::Var Tape::log_softmax_col(Var a) {
  require(value(a).cols() == 1, ErrorCode::kInvalidArgument, "log_softmax_col expects a column");
  const Eigen::VectorXd x = value(a).col(0);
  double m = x.maxCoeff();
  double lse = m + std::log((x.array() - m).exp().sum());
  Eigen::MatrixXd v = (x.array() - lse).matrix();
  int ia = a.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a), [ia, self](Tape& t) {
    const Eigen::VectorXd lp = t.nodes_[self].value.col(0);
    const Eigen::VectorXd g = t.grad_ref(self).col(0);
    double gsum = g.sum();
    t.accum(ia, (g.array() - lp.array().exp() * gsum).matrix());
  });
}

Tape::Var Tape::concat_rows(Var a, Var b) {
  require(value(a).cols() == value(b).cols(), ErrorCode::kInvalidArgument,
          "concat_rows column counts differ");
  Eigen::MatrixXd v(value(a).rows() + value(b).rows(), value(a).cols());
  v.topRows(value(a).rows()) = value(a);
  v.bottomRows(value(b).rows()) = value(b);
  int ia = a.idx, ib = b.idx;
  Eigen::Index ra = value(a).rows(), rb = value(b).rows();
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a) || needs(b), [ia, ib, ra, rb, self](Tape& t) {
    const Eigen::MatrixXd& g = t.grad_ref(self);
    t.accum(ia, g.topRows(ra));
    t.accum(ib, g.bottomRows(rb));
  });
}

Tape::Var Tape::slice_col(Var a, int j) {
  require(j >= 0 && j < value(a).cols(), ErrorCode::kInvalidArgument, "column index out of range");
  Eigen::MatrixXd v = value(a).col(j);
  int ia = a.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(a), [ia, j, self](Tape& t) {
    const Eigen::MatrixXd& src = t.nodes_[ia].value;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(src.rows(), src.cols());
    d.col(j) = t.grad_ref(self);
    t.accum(ia, d);
  });
}

Tape::Var Tape::pick_neg(Var log_probs, int row) {
  require(value(log_probs).cols() == 1 && row >= 0 && row < value(log_probs).rows(),
          ErrorCode::kInvalidArgument, "pick_neg index out of range");
  Eigen::MatrixXd v(1, 1);
  v(0, 0) = -value(log_probs)(row, 0);
  int ia = log_probs.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(log_probs), [ia, row, self](Tape& t) {
    const Eigen::MatrixXd& src = t.nodes_[ia].value;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(src.rows(), src.cols());
    d(row, 0) = -t.grad_ref(self)(0, 0);
    t.accum(ia, d);
  });
}

Tape::Var Tape::conv1d(Var w, Var bias, Var x, int kernel, int stride, int pad) {
  const Eigen::MatrixXd& wv = value(w);
  const Eigen::MatrixXd& xv = value(x);
  const Eigen::Index in_ch = xv.rows();
  const Eigen::Index out_ch = wv.rows();
  require(wv.cols() == in_ch * kernel, ErrorCode::kInvalidArgument,
          "conv weight shape mismatch");
  require(value(bias).rows() == out_ch && value(bias).cols() == 1,
          ErrorCode::kInvalidArgument, "conv bias shape mismatch");
  const Eigen::Index t_in = xv.cols();
  const Eigen::Index t_out = (t_in + 2 * pad - kernel) / stride + 1;
  require(t_out >= 1, ErrorCode::kTooShort, "conv input shorter than kernel");

  Eigen::MatrixXd v = value(bias).col(0).replicate(1, t_out);
  for (Eigen::Index t = 0; t < t_out; ++t) {
    for (int k = 0; k < kernel; ++k) {
      Eigen::Index j = t * stride + k - pad;
      if (j < 0 || j >= t_in) continue;
      v.col(t).noalias() += wv.middleCols(k * in_ch, in_ch) * xv.col(j);
    }
  }

  int iw = w.idx, ib = bias.idx, ix = x.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(w) || needs(bias) || needs(x),
              [iw, ib, ix, kernel, stride, pad, in_ch, t_in, t_out, self](Tape& t) {
                const Eigen::MatrixXd& g = t.grad_ref(self);
                const Eigen::MatrixXd& wv = t.nodes_[iw].value;
                const Eigen::MatrixXd& xv = t.nodes_[ix].value;
                Eigen::MatrixXd dw = Eigen::MatrixXd::Zero(wv.rows(), wv.cols());
                Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(xv.rows(), xv.cols());
                for (Eigen::Index tt = 0; tt < t_out; ++tt) {
                  for (int k = 0; k < kernel; ++k) {
                    Eigen::Index j = tt * stride + k - pad;
                    if (j < 0 || j >= t_in) continue;
                    dw.middleCols(k * in_ch, in_ch).noalias() += g.col(tt) * xv.col(j).transpose();
                    dx.col(j).noalias() +=
                        wv.middleCols(k * in_ch, in_ch).transpose() * g.col(tt);
                  }
                }
                t.accum(iw, dw);
                t.accum(ix, dx);
                t.accum(ib, g.rowwise().sum());
              });
}

Tape::Var Tape::ctc_nll(Var logits, const std::vector<int>& targets, int blank) {
  const Eigen::MatrixXd& lg = value(logits);
  const Eigen::Index vocab = lg.rows();
  const Eigen::Index frames = lg.cols();
  require(!targets.empty(), ErrorCode::kInvalidArgument, "empty target sequence");
  for (int tok : targets) {
    require(tok >= 0 && tok < vocab && tok != blank, ErrorCode::kInvalidArgument,
            "target token outside vocabulary");
  }

  const int label_len = static_cast<int>(targets.size());
  int min_frames = label_len;
  for (int i = 1; i < label_len; ++i) {
    if (targets[i] == targets[i - 1]) ++min_frames;
  }
  require(frames >= min_frames, ErrorCode::kSequenceTooLong,
          "target needs more frames than the encoder produced");

  const int states = 2 * label_len + 1;
  std::vector<int> z(states, blank);
  for (int i = 0; i < label_len; ++i) z[2 * i + 1] = targets[i];

  // Column-wise log-softmax of the logits.
  Eigen::MatrixXd lp(vocab, frames);
  Eigen::MatrixXd sm(vocab, frames);
  for (Eigen::Index t = 0; t < frames; ++t) {
    double m = lg.col(t).maxCoeff();
    Eigen::ArrayXd e = (lg.col(t).array() - m).exp();
    double s = e.sum();
    sm.col(t) = (e / s).matrix();
    lp.col(t) = (lg.col(t).array() - (m + std::log(s))).matrix();
  }

  Eigen::MatrixXd alpha = Eigen::MatrixXd::Constant(states, frames, kNegInf);
  alpha(0, 0) = lp(z[0], 0);
  if (states > 1) alpha(1, 0) = lp(z[1], 0);
  for (Eigen::Index t = 1; t < frames; ++t) {
    for (int s = 0; s < states; ++s) {
      double m = alpha(s, t - 1);
      if (s >= 1) m = lse2(m, alpha(s - 1, t - 1));
      if (s >= 2 && z[s] != blank && z[s] != z[s - 2]) m = lse2(m, alpha(s - 2, t - 1));
      if (m != kNegInf) alpha(s, t) = m + lp(z[s], t);
    }
  }
  double log_z = alpha(states - 1, frames - 1);
  if (states > 1) log_z = lse2(log_z, alpha(states - 2, frames - 1));
  require(log_z != kNegInf, ErrorCode::kSequenceTooLong, "no feasible alignment");

  Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(states, frames, kNegInf);
  beta(states - 1, frames - 1) = lp(z[states - 1], frames - 1);
  if (states > 1) beta(states - 2, frames - 1) = lp(z[states - 2], frames - 1);
  for (Eigen::Index t = frames - 2; t >= 0; --t) {
    for (int s = states - 1; s >= 0; --s) {
      double m = beta(s, t + 1);
      if (s + 1 < states) m = lse2(m, beta(s + 1, t + 1));
      if (s + 2 < states && z[s + 2] != blank && z[s + 2] != z[s]) {
        m = lse2(m, beta(s + 2, t + 1));
      }
      if (m != kNegInf) beta(s, t) = m + lp(z[s], t);
    }
  }

  // Per-frame posteriors folded by emitting token.
  Eigen::MatrixXd post_sum = Eigen::MatrixXd::Zero(vocab, frames);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (int s = 0; s < states; ++s) {
      double a = alpha(s, t), b = beta(s, t);
      if (a == kNegInf || b == kNegInf) continue;
      post_sum(z[s], t) += std::exp(a + b - lp(z[s], t) - log_z);
    }
  }

  Eigen::MatrixXd v(1, 1);
  v(0, 0) = -log_z;
  int il = logits.idx;
  int self = static_cast<int>(nodes_.size());
  return push(std::move(v), needs(logits),
              [il, self, sm = std::move(sm), post_sum = std::move(post_sum)](Tape& t) {
                double g = t.grad_ref(self)(0, 0);
                t.accum(il, g * (sm - post_sum));
              });
}

}  // namespace aaekit::asr

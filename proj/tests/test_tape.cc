// tests/test_tape.cc

// Copyright 2026 The aaekit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "aaekit/asr/tape.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"

using namespace aaekit;
using asr::Tape;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.gaussian() * 0.7;
  }
  return m;
}

using BuildFn = std::function<Tape::Var(Tape&, Tape::Var)>;

// Rebuilds the graph at perturbed inputs and compares every coordinate of the
// reverse-mode gradient against a central difference.
void fd_check(const Eigen::MatrixXd& x0, const BuildFn& build, double tol = 1e-5) {
  Tape tape;
  const Tape::Var x = tape.leaf(x0, true);
  const Tape::Var root = build(tape, x);
  REQUIRE(tape.value(root).size() == 1);
  tape.backward(root);
  const Eigen::MatrixXd g = tape.grad(x);
  REQUIRE(g.rows() == x0.rows());
  REQUIRE(g.cols() == x0.cols());

  const double h = 1e-5;
  const auto eval = [&](Eigen::Index i, Eigen::Index j, double v) {
    Eigen::MatrixXd xp = x0;
    xp(i, j) = v;
    Tape t2;
    return t2.scalar(build(t2, t2.leaf(xp, false)));
  };
  for (Eigen::Index i = 0; i < x0.rows(); ++i) {
    for (Eigen::Index j = 0; j < x0.cols(); ++j) {
      const double fd =
          (eval(i, j, x0(i, j) + h) - eval(i, j, x0(i, j) - h)) / (2.0 * h);
      CHECK(std::abs(fd - g(i, j)) <= tol * std::max(1.0, std::abs(g(i, j))));
    }
  }
}

// Contracts an r x c value to 1 x 1 with fixed weights so every entry of the
// intermediate influences the root. Dimensions are copied out up front; the
// leaf() pushes may reallocate the node storage behind value() references.
Tape::Var to_scalar(Tape& t, Tape::Var m, Rng& rng) {
  const Eigen::Index r = t.value(m).rows();
  const Eigen::Index c = t.value(m).cols();
  const Tape::Var row = t.leaf(random_matrix(rng, 1, r));
  const Tape::Var col = t.leaf(random_matrix(rng, c, 1));
  return t.matmul(t.matmul(row, m), col);
}

std::vector<int> collapse(const std::vector<int>& path, int blank) {
  std::vector<int> out;
  int prev = -1;
  for (int s : path) {
    if (s != prev && s != blank) out.push_back(s);
    prev = s;
  }
  return out;
}

// Brute-force CTC: per-frame softmax, then sum the probability of every
// frame-level path whose collapse equals the target.
double ctc_oracle(const Eigen::MatrixXd& logits, const std::vector<int>& y, int blank) {
  const int vocab = static_cast<int>(logits.rows());
  const int frames = static_cast<int>(logits.cols());
  Eigen::MatrixXd p(vocab, frames);
  for (int t = 0; t < frames; ++t) {
    Eigen::ArrayXd e = (logits.col(t).array() - logits.col(t).maxCoeff()).exp();
    p.col(t) = (e / e.sum()).matrix();
  }
  double total = 0.0;
  std::vector<int> path(static_cast<std::size_t>(frames), 0);
  while (true) {
    if (collapse(path, blank) == y) {
      double prob = 1.0;
      for (int t = 0; t < frames; ++t) prob *= p(path[static_cast<std::size_t>(t)], t);
      total += prob;
    }
    int t = 0;
    while (t < frames && ++path[static_cast<std::size_t>(t)] == vocab) {
      path[static_cast<std::size_t>(t)] = 0;
      ++t;
    }
    if (t == frames) break;
  }
  return -std::log(total);
}

int min_ctc_frames(const std::vector<int>& y) {
  int n = static_cast<int>(y.size());
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] == y[i - 1]) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("leaves, values and unused gradients") {
  Tape t;
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  const Tape::Var a = t.leaf(m, true);
  CHECK(t.value(a) == m);
  CHECK(t.grad(a).isZero());

  const Tape::Var s = t.leaf(Eigen::MatrixXd::Constant(1, 1, 7.5));
  CHECK(t.scalar(s) == 7.5);
}

TEST_CASE("reverse-mode gradients match central differences per op") {
  Rng rng(511);

  SUBCASE("matmul, both operands and fan-out through transpose") {
    const Eigen::MatrixXd b = random_matrix(rng, 4, 3);
    fd_check(random_matrix(rng, 2, 4), [&](Tape& t, Tape::Var x) {
      Rng wr(1);
      return to_scalar(t, t.matmul(x, t.leaf(b)), wr);
    });
    fd_check(random_matrix(rng, 4, 3), [&](Tape& t, Tape::Var x) {
      Rng wr(2);
      return to_scalar(t, t.matmul(t.leaf(random_matrix(wr, 2, 4)), x), wr);
    });
    // x enters twice; adjoints must accumulate
    fd_check(random_matrix(rng, 3, 2), [](Tape& t, Tape::Var x) {
      Rng wr(3);
      return to_scalar(t, t.matmul(x, t.transpose(x)), wr);
    });
  }

  SUBCASE("add, add_scaled, affine, hadamard") {
    const Eigen::MatrixXd b = random_matrix(rng, 3, 3);
    fd_check(random_matrix(rng, 3, 3), [&](Tape& t, Tape::Var x) {
      Rng wr(4);
      const Tape::Var sum = t.add(x, t.leaf(b));
      const Tape::Var mix = t.add_scaled(sum, 0.75, x, -1.25);
      const Tape::Var aff = t.affine(mix, 1.4, 0.3);
      return to_scalar(t, t.hadamard(aff, x), wr);
    });
  }

  SUBCASE("tanh and sigmoid") {
    fd_check(random_matrix(rng, 2, 5), [](Tape& t, Tape::Var x) {
      Rng wr(5);
      return to_scalar(t, t.tanh_op(x), wr);
    });
    fd_check(random_matrix(rng, 2, 5), [](Tape& t, Tape::Var x) {
      Rng wr(6);
      return to_scalar(t, t.sigmoid(x), wr);
    });
  }

  SUBCASE("broadcast_col_add over matrix and column") {
    const Eigen::MatrixXd m = random_matrix(rng, 3, 4);
    fd_check(random_matrix(rng, 3, 4), [&](Tape& t, Tape::Var x) {
      Rng wr(7);
      return to_scalar(t, t.broadcast_col_add(x, t.leaf(random_matrix(wr, 3, 1))), wr);
    });
    fd_check(random_matrix(rng, 3, 1), [&](Tape& t, Tape::Var x) {
      Rng wr(8);
      return to_scalar(t, t.broadcast_col_add(t.leaf(m), x), wr);
    });
  }

  SUBCASE("softmax, log-softmax and pick_neg") {
    fd_check(random_matrix(rng, 6, 1), [](Tape& t, Tape::Var x) {
      Rng wr(9);
      return to_scalar(t, t.softmax_col(x), wr);
    });
    fd_check(random_matrix(rng, 6, 1), [](Tape& t, Tape::Var x) {
      Rng wr(10);
      return to_scalar(t, t.log_softmax_col(x), wr);
    });
    fd_check(random_matrix(rng, 6, 1),
             [](Tape& t, Tape::Var x) { return t.pick_neg(t.log_softmax_col(x), 2); });
  }

  SUBCASE("concat_rows and slice_col") {
    const Eigen::MatrixXd b = random_matrix(rng, 2, 4);
    fd_check(random_matrix(rng, 3, 4), [&](Tape& t, Tape::Var x) {
      Rng wr(11);
      return to_scalar(t, t.concat_rows(x, t.leaf(b)), wr);
    });
    fd_check(random_matrix(rng, 3, 4), [&](Tape& t, Tape::Var x) {
      Rng wr(12);
      return to_scalar(t, t.slice_col(x, 1), wr);
    });
  }

  SUBCASE("conv1d wrt weights, bias and input") {
    const int kernel = 3, stride = 2, pad = 1;
    const Eigen::MatrixXd w0 = random_matrix(rng, 3, 2 * kernel);
    const Eigen::MatrixXd b0 = random_matrix(rng, 3, 1);
    const Eigen::MatrixXd x0 = random_matrix(rng, 2, 7);
    fd_check(w0, [&](Tape& t, Tape::Var w) {
      Rng wr(13);
      return to_scalar(t, t.conv1d(w, t.leaf(b0), t.leaf(x0), kernel, stride, pad), wr);
    });
    fd_check(b0, [&](Tape& t, Tape::Var b) {
      Rng wr(14);
      return to_scalar(t, t.conv1d(t.leaf(w0), b, t.leaf(x0), kernel, stride, pad), wr);
    });
    fd_check(x0, [&](Tape& t, Tape::Var x) {
      Rng wr(15);
      return to_scalar(t, t.conv1d(t.leaf(w0), t.leaf(b0), x, kernel, stride, pad), wr);
    });
  }

  SUBCASE("ctc_nll gradient") {
    fd_check(random_matrix(rng, 4, 5),
             [](Tape& t, Tape::Var x) { return t.ctc_nll(x, {1, 2}, 0); });
    fd_check(random_matrix(rng, 4, 6),
             [](Tape& t, Tape::Var x) { return t.ctc_nll(x, {3, 3}, 0); });
  }
}

TEST_CASE("ctc_nll equals path enumeration for every small case") {
  // 4-token vocabulary (blank = 0), every target over {1,2,3} with length
  // 1..3, every frame count 1..6.
  Rng rng(90210);
  std::vector<std::vector<int>> targets;
  for (int a = 1; a <= 3; ++a) {
    targets.push_back({a});
    for (int b = 1; b <= 3; ++b) {
      targets.push_back({a, b});
      for (int c = 1; c <= 3; ++c) targets.push_back({a, b, c});
    }
  }
  REQUIRE(targets.size() == 3 + 9 + 27);

  int compared = 0;
  for (int frames = 1; frames <= 6; ++frames) {
    const Eigen::MatrixXd logits = random_matrix(rng, 4, frames);
    for (const auto& y : targets) {
      Tape t;
      const Tape::Var lg = t.leaf(logits, true);
      if (frames < min_ctc_frames(y)) {
        CHECK_THROWS_AS(t.ctc_nll(lg, y, 0), Error);
        continue;
      }
      const double got = t.scalar(t.ctc_nll(lg, y, 0));
      const double want = ctc_oracle(logits, y, 0);
      CHECK(std::abs(got - want) <= 1e-9);
      ++compared;
    }
  }
  CHECK(compared > 150);
}

TEST_CASE("ctc_nll rejects bad targets") {
  Tape t;
  const Tape::Var lg = t.leaf(Eigen::MatrixXd::Zero(4, 5), true);
  CHECK_THROWS_AS(t.ctc_nll(lg, {}, 0), Error);
  CHECK_THROWS_AS(t.ctc_nll(lg, {0}, 0), Error);   // blank as target
  CHECK_THROWS_AS(t.ctc_nll(lg, {4}, 0), Error);   // out of vocabulary
  CHECK_THROWS_AS(t.ctc_nll(lg, {-1}, 0), Error);
}

TEST_CASE("backward resets adjoints between roots") {
  Tape t;
  Eigen::MatrixXd x0(2, 1);
  x0 << 0.3, -0.4;
  const Tape::Var x = t.leaf(x0, true);
  const Tape::Var r1 = t.pick_neg(t.log_softmax_col(x), 0);
  const Tape::Var r2 = t.pick_neg(t.log_softmax_col(x), 1);

  Eigen::Vector2d p = x0.array().exp().matrix();
  p /= p.sum();

  t.backward(r1);
  const Eigen::MatrixXd g1 = t.grad(x);
  t.backward(r2);
  const Eigen::MatrixXd g2 = t.grad(x);
  t.backward(r1);
  CHECK((t.grad(x) - g1).norm() == 0.0);  // identical on repeat, no leakage
  // d(-log p_k)/dx = softmax(x) - e_k
  CHECK((g1 - (p - Eigen::Vector2d(1.0, 0.0))).norm() < 1e-12);
  CHECK((g2 - (p - Eigen::Vector2d(0.0, 1.0))).norm() < 1e-12);
}

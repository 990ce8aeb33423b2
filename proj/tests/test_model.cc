// tests/test_model.cc

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

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "aaekit/asr/manifest.hpp"
#include "aaekit/asr/model.hpp"
#include "aaekit/asr/vocab.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"

using namespace aaekit;

namespace {

asr::ModelConfig small_config(int n_mels) {
  asr::ModelConfig c;
  c.n_mels = n_mels;
  c.enc_hidden = 12;
  c.dec_hidden = 10;
  c.embed_dim = 6;
  c.att_dim = 8;
  c.att_conv_channels = 4;
  c.att_conv_kernel = 5;
  c.max_decode_len = 12;
  return c;
}

feat::LogMelFeatures fake_features(Rng& rng, int frames, int n_mels) {
  feat::LogMelFeatures f;
  f.values.resize(frames, n_mels);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (Eigen::Index m = 0; m < n_mels; ++m) f.values(t, m) = 0.5 * rng.gaussian();
  }
  f.config.n_mels = n_mels;
  f.source_len = static_cast<std::size_t>(frames) * 160;
  return f;
}

std::filesystem::path temp_dir(const char* tag) {
  auto p = std::filesystem::temp_directory_path() /
           (std::string("aaekit_model_test_") + tag + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("model config validation") {
  asr::ModelConfig c = small_config(8);
  CHECK_NOTHROW(c.validate());
  c.alpha = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config(8);
  c.n_mels = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config(8);
  c.max_decode_len = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("loss kind names round trip") {
  CHECK(asr::parse_loss_kind("hybrid") == asr::LossKind::kHybrid);
  CHECK(asr::parse_loss_kind("attention-ce") == asr::LossKind::kAttentionCe);
  CHECK(asr::parse_loss_kind(asr::loss_kind_name(asr::LossKind::kHybrid)) ==
        asr::LossKind::kHybrid);
  CHECK_THROWS_AS(asr::parse_loss_kind("viterbi"), Error);
}

TEST_CASE("input_gradient matches central finite differences, both loss kinds") {
  const int n_mels = 12, frames = 9;
  Rng rng(303);
  const asr::AsrModel model(small_config(n_mels), asr::Vocabulary("abcd"), 77);
  const feat::LogMelFeatures x0 = fake_features(rng, frames, n_mels);
  const std::vector<int> y = model.vocab().encode("bad");

  for (asr::LossKind kind : {asr::LossKind::kAttentionCe, asr::LossKind::kHybrid}) {
    const Eigen::MatrixXd g = model.input_gradient(x0, y, kind);
    REQUIRE(g.rows() == frames);
    REQUIRE(g.cols() == n_mels);

    const auto loss_at = [&](const feat::LogMelFeatures& f) {
      return kind == asr::LossKind::kHybrid ? model.hybrid_loss(f, y)
                                            : model.attention_loss(f, y);
    };
    const double h = 1e-3;
    Rng pick(404);
    double max_rel = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Eigen::Index i = static_cast<Eigen::Index>(pick.uniform_int(0, frames - 1));
      const Eigen::Index j = static_cast<Eigen::Index>(pick.uniform_int(0, n_mels - 1));
      feat::LogMelFeatures xp = x0;
      xp.values(i, j) = x0.values(i, j) + h;
      const double up = loss_at(xp);
      xp.values(i, j) = x0.values(i, j) - h;
      const double dn = loss_at(xp);
      const double fd = (up - dn) / (2.0 * h);
      const double rel = std::abs(fd - g(i, j)) / std::max({std::abs(fd), std::abs(g(i, j)), 1e-8});
      max_rel = std::max(max_rel, rel);
    }
    CHECK(max_rel <= 1e-4);
  }
}

TEST_CASE("hybrid loss is the configured convex combination") {
  const int n_mels = 10;
  Rng rng(8);
  asr::ModelConfig cfg = small_config(n_mels);
  cfg.alpha = 0.3;
  const asr::AsrModel model(cfg, asr::Vocabulary("xyz"), 5);
  const feat::LogMelFeatures x = fake_features(rng, 11, n_mels);
  const std::vector<int> y = model.vocab().encode("zx");

  const double h = model.hybrid_loss(x, y);
  const double c = model.ctc_loss(x, y);
  const double a = model.attention_loss(x, y);
  CHECK(h == doctest::Approx(0.3 * c + 0.7 * a).epsilon(1e-12));
  CHECK(c > 0.0);
  CHECK(a > 0.0);
}

TEST_CASE("target and feature validation") {
  Rng rng(21);
  const asr::AsrModel model(small_config(10), asr::Vocabulary("ab"), 3);
  const feat::LogMelFeatures x = fake_features(rng, 10, 10);

  CHECK_THROWS_AS(model.attention_loss(x, {}), Error);
  CHECK_THROWS_AS(model.attention_loss(x, {model.vocab().blank_id()}), Error);
  CHECK_THROWS_AS(model.attention_loss(x, {model.vocab().eos_id()}), Error);

  const feat::LogMelFeatures wrong_dim = fake_features(rng, 10, 9);
  CHECK_THROWS_AS(model.attention_loss(wrong_dim, {1}), Error);

  // more required frames than the encoder emits
  const feat::LogMelFeatures tiny = fake_features(rng, 3, 10);
  CHECK_THROWS_AS(model.ctc_loss(tiny, model.vocab().encode("aabb")), Error);
}

TEST_CASE("encoded_frames follows the conv geometry") {
  const asr::AsrModel model(small_config(10), asr::Vocabulary("ab"), 3);
  // kernel 3, pad 1: stride-2 layer halves (rounding up), stride-1 keeps
  CHECK(model.encoded_frames(9) == 5);
  CHECK(model.encoded_frames(10) == 5);
  CHECK(model.encoded_frames(11) == 6);
  CHECK(model.encoded_frames(200) == 100);
}

TEST_CASE("decode_greedy emits only characters within the length budget") {
  Rng rng(99);
  const asr::AsrModel model(small_config(10), asr::Vocabulary("abc"), 11);
  const feat::LogMelFeatures x = fake_features(rng, 20, 10);

  const asr::DecodeResult r = model.decode_greedy(x);
  CHECK(r.tokens.size() <= 12);
  for (int tok : r.tokens) CHECK(model.vocab().is_char(tok));
  CHECK(r.log_score <= 0.0);

  const asr::DecodeResult shorter = model.decode_greedy(x, 3);
  CHECK(shorter.tokens.size() <= 3);
}

TEST_CASE("save/load round trip preserves parameters and losses") {
  Rng rng(55);
  const auto dir = temp_dir("ckpt");
  const std::string path = (dir / "model.ckpt").string();

  const asr::AsrModel model(small_config(10), asr::Vocabulary("abcd"), 1234);
  model.save(path);
  const asr::AsrModel back = asr::AsrModel::load(path);

  CHECK(back.vocab().chars() == "abcd");
  CHECK(back.config().enc_hidden == model.config().enc_hidden);
  REQUIRE(back.params().items.size() == model.params().items.size());
  for (std::size_t i = 0; i < model.params().items.size(); ++i) {
    CHECK(back.params().items[i].first == model.params().items[i].first);
    CHECK(back.params().items[i].second == model.params().items[i].second);
  }

  const feat::LogMelFeatures x = fake_features(rng, 12, 10);
  const std::vector<int> y = model.vocab().encode("cab");
  CHECK(model.hybrid_loss(x, y) == back.hybrid_loss(x, y));

  CHECK_THROWS_AS(asr::AsrModel::load((dir / "missing.ckpt").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("manifest json-lines round trip and path resolution") {
  const auto dir = temp_dir("manifest");
  const std::string path = (dir / "corpus.jsonl").string();

  std::vector<asr::ManifestEntry> entries = {
      {"utt0", "wavs/utt0.wav", "abcd"},
      {"utt1", "/abs/utt1.wav", "a \"quoted\" transcript"},
  };
  asr::write_manifest(path, entries);

  const auto back = asr::read_manifest(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "utt0");
  CHECK(back[0].audio_path == (dir / "wavs/utt0.wav").string());  // relative resolves
  CHECK(back[1].audio_path == "/abs/utt1.wav");                   // absolute kept
  CHECK(back[1].transcript == "a \"quoted\" transcript");

  CHECK_THROWS_AS(asr::read_manifest((dir / "nope.jsonl").string()), Error);
  std::filesystem::remove_all(dir);
}

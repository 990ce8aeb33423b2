// src/attack/fgsm.cc

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

#include "aaekit/attack/fgsm.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "aaekit/common/error.hpp"
#include "aaekit/feat/matrix_io.hpp"

namespace aaekit::attack {

void AttackConfig::validate() const {
  require(epsilon >= 0.0, ErrorCode::kInvalidConfig, "epsilon must be >= 0");
  require(window_len >= 1 && stride >= 1, ErrorCode::kInvalidConfig,
          "window_len and stride must be >= 1");
}

std::vector<std::pair<int, int>> label_windows(int label_len, const AttackConfig& cfg) {
  cfg.validate();
  require(label_len >= 1, ErrorCode::kEmptyReference, "no labels to window");
  const int n_windows = (label_len + cfg.stride - 1) / cfg.stride;
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n_windows));
  for (int i = 0; i < n_windows; ++i) {
    int lo = i * cfg.stride;
    int hi = std::min(lo + cfg.window_len, label_len);
    out.emplace_back(lo, hi);
  }
  return out;
}

Eigen::MatrixXd accumulate_windowed_gradient(const asr::AsrModel& m,
                                             const feat::LogMelFeatures& x,
                                             const std::vector<int>& reference,
                                             const AttackConfig& cfg) {
  require(!reference.empty(), ErrorCode::kEmptyReference, "reference decode is empty");
  const auto windows = label_windows(static_cast<int>(reference.size()), cfg);

  asr::LossGraph g = m.build_loss_graph(x, reference, true, false,
                                        cfg.loss_kind == asr::LossKind::kHybrid);
  asr::Tape& tape = *g.tape;

  // One scalar root per window, all recorded before any backward sweep.
  std::vector<asr::Tape::Var> roots;
  roots.reserve(windows.size());
  for (const auto& [lo, hi] : windows) {
    asr::Tape::Var acc = g.att_terms[static_cast<std::size_t>(lo)];
    for (int l = lo + 1; l < hi; ++l) acc = tape.add(acc, g.att_terms[static_cast<std::size_t>(l)]);
    if (cfg.loss_kind == asr::LossKind::kHybrid) {
      acc = tape.add_scaled(g.ctc_term, m.config().alpha, acc, 1.0 - m.config().alpha);
    }
    roots.push_back(acc);
  }

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(x.values.rows(), x.values.cols());
  for (asr::Tape::Var root : roots) {
    tape.backward(root);
    Eigen::MatrixXd gw = tape.grad(g.input).transpose();
    double l1 = gw.cwiseAbs().sum();
    if (l1 > 0.0) total += gw / l1;
  }
  return total;
}

Eigen::MatrixXd fgsm_delta(const Eigen::MatrixXd& g, double epsilon) {
  require(g.allFinite(), ErrorCode::kInvalidArgument, "gradient contains non-finite values");
  return g.unaryExpr([epsilon](double v) {
    if (v > 0.0) return epsilon;
    if (v < 0.0) return -epsilon;
    return 0.0;
  });
}

AdversarialRecord generate_adversarial(const asr::AsrModel& m, const feat::LogMelFeatures& x,
                                       const AttackConfig& cfg) {
  cfg.validate();
  AdversarialRecord rec;
  rec.clean_features = x;
  rec.reference_decode = m.decode_greedy(x).tokens;

  if (cfg.epsilon == 0.0 || rec.reference_decode.empty()) {
    // Nothing to perturb (or nothing decodable to target): identity attack.
    rec.delta = Eigen::MatrixXd::Zero(x.values.rows(), x.values.cols());
    rec.adv_features = x;
    return rec;
  }

  Eigen::MatrixXd g = accumulate_windowed_gradient(m, x, rec.reference_decode, cfg);
  rec.delta = fgsm_delta(g, cfg.epsilon);
  rec.adv_features = x;
  rec.adv_features.values = x.values + rec.delta;
  return rec;
}

namespace {

nlohmann::json feature_config_json(const feat::FeatureConfig& c) {
  return {{"n_fft", c.n_fft},         {"hop", c.hop},
          {"n_mels", c.n_mels},       {"f_min_hz", c.f_min_hz},
          {"f_max_hz", c.f_max_hz},   {"log_floor", c.log_floor},
          {"log_offset", c.log_offset}, {"log_scale", c.log_scale},
          {"gl_iters", c.gl_iters}};
}

feat::FeatureConfig feature_config_from_json(const nlohmann::json& j) {
  feat::FeatureConfig c;
  c.n_fft = j.at("n_fft").get<int>();
  c.hop = j.at("hop").get<int>();
  c.n_mels = j.at("n_mels").get<int>();
  c.f_min_hz = j.at("f_min_hz").get<double>();
  c.f_max_hz = j.at("f_max_hz").get<double>();
  c.log_floor = j.at("log_floor").get<double>();
  c.log_offset = j.at("log_offset").get<double>();
  c.log_scale = j.at("log_scale").get<double>();
  c.gl_iters = j.at("gl_iters").get<int>();
  return c;
}

}  // namespace

void save_record(const AdversarialRecord& rec, const AttackConfig& cfg, const std::string& dir) {
  const std::filesystem::path base = std::filesystem::path(dir) / rec.utt_id;
  feat::write_fmat(base.string() + ".clean", rec.clean_features.values);
  feat::write_fmat(base.string() + ".delta", rec.delta);
  feat::write_fmat(base.string() + ".adv", rec.adv_features.values);

  nlohmann::json j;
  j["utt_id"] = rec.utt_id;
  j["epsilon"] = cfg.epsilon;
  j["window_len"] = cfg.window_len;
  j["stride"] = cfg.stride;
  j["loss_kind"] = asr::loss_kind_name(cfg.loss_kind);
  j["reference_decode"] = rec.reference_decode;
  j["ground_truth"] = rec.ground_truth;
  j["source_len"] = rec.clean_features.source_len;
  j["sample_rate_hz"] = rec.clean_features.sample_rate_hz;
  j["feature_config"] = feature_config_json(rec.clean_features.config);

  std::ofstream os(base.string() + ".json");
  require(os.is_open(), ErrorCode::kIoError, "cannot write sidecar for " + rec.utt_id);
  os << j.dump(2) << '\n';
  require(static_cast<bool>(os), ErrorCode::kIoError, "short sidecar write for " + rec.utt_id);
}

AdversarialRecord load_record(const std::string& dir, const std::string& utt_id) {
  const std::filesystem::path base = std::filesystem::path(dir) / utt_id;
  std::ifstream is(base.string() + ".json");
  require(is.is_open(), ErrorCode::kNotFound, "no sidecar for " + utt_id);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kDataError, std::string("bad sidecar: ") + e.what());
  }

  AdversarialRecord rec;
  rec.utt_id = j.at("utt_id").get<std::string>();
  rec.reference_decode = j.at("reference_decode").get<std::vector<int>>();
  rec.ground_truth = j.at("ground_truth").get<std::vector<int>>();

  feat::FeatureConfig fc = feature_config_from_json(j.at("feature_config"));
  auto fill = [&](feat::LogMelFeatures& f, const std::string& suffix) {
    f.values = feat::read_fmat(base.string() + suffix);
    f.config = fc;
    f.source_len = j.at("source_len").get<std::size_t>();
    f.sample_rate_hz = j.at("sample_rate_hz").get<int>();
  };
  fill(rec.clean_features, ".clean");
  fill(rec.adv_features, ".adv");
  rec.delta = feat::read_fmat(base.string() + ".delta");
  return rec;
}

}  // namespace aaekit::attack

// src/pipeline/config.cc

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

#include "aaekit/pipeline/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aaekit/common/error.hpp"

namespace aaekit::pipeline {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long to_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    require(pos == v.size(), ErrorCode::kInvalidConfig, "bad integer for " + key);
    return x;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(ErrorCode::kInvalidConfig, "bad integer for " + key + ": " + v);
  }
}

double to_real(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    require(pos == v.size(), ErrorCode::kInvalidConfig, "bad number for " + key);
    return x;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(ErrorCode::kInvalidConfig, "bad number for " + key + ": " + v);
  }
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(n_train >= 1 && n_test >= 1, ErrorCode::kInvalidConfig, "corpus sizes must be positive");
  require(n_babble >= 3, ErrorCode::kInvalidConfig, "need at least 3 babble sources");
  require(min_len >= 1 && min_len <= max_len, ErrorCode::kInvalidConfig,
          "bad transcript length range");
  require(char_dur_s > 0.0 && gap_s >= 0.0, ErrorCode::kInvalidConfig,
          "char_dur_s must be positive and gap_s nonnegative");
  require(amp_jitter_db >= 0.0 && std::isfinite(bed_snr_db), ErrorCode::kInvalidConfig,
          "amp_jitter_db must be nonnegative and bed_snr_db finite");
  require(!levels.empty(), ErrorCode::kInvalidConfig, "need at least one compression level");
  for (const std::string& l : levels) {
    require(l == "uncompressed" || l == "hi" || l == "mid" || l == "lo",
            ErrorCode::kInvalidConfig, "unknown compression level: " + l);
  }
  require(defense_level == "hi" || defense_level == "mid" || defense_level == "lo",
          ErrorCode::kInvalidConfig, "defense level must be a codec preset");
  require(external_encode.empty() == external_decode.empty(), ErrorCode::kInvalidConfig,
          "external codec needs both encode and decode templates");
  require(!noise_kinds.empty() && !noise_snrs_db.empty(), ErrorCode::kInvalidConfig,
          "noise grid must be non-empty");
  require(jobs >= 1, ErrorCode::kInvalidConfig, "jobs must be >= 1");
  feat.validate(audio::kDefaultSampleRate);
  model.validate();
  attack.validate();
  require(model.n_mels == feat.n_mels, ErrorCode::kInvalidConfig,
          "model n_mels must match the featurizer");
}

codec::CodecSpec ExperimentConfig::level_codec(const std::string& name) const {
  require(name != "uncompressed", ErrorCode::kInvalidArgument,
          "the uncompressed level has no codec");
  codec::CodecSpec spec = codec::builtin_preset(name);
  if (external()) {
    spec.kind = codec::CodecKind::kExternalCommand;
    spec.encode_template = external_encode;
    spec.decode_template = external_decode;
  }
  return spec;
}

codec::CodecSpec ExperimentConfig::defense_codec() const { return level_codec(defense_level); }

ExperimentConfig default_config() { return ExperimentConfig{}; }

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "jobs") {
    cfg.jobs = static_cast<int>(to_int(value, key));
  } else if (key == "corpus.n_train") {
    cfg.n_train = static_cast<int>(to_int(value, key));
  } else if (key == "corpus.n_test") {
    cfg.n_test = static_cast<int>(to_int(value, key));
  } else if (key == "corpus.n_babble") {
    cfg.n_babble = static_cast<int>(to_int(value, key));
  } else if (key == "corpus.min_len") {
    cfg.min_len = static_cast<int>(to_int(value, key));
  } else if (key == "corpus.max_len") {
    cfg.max_len = static_cast<int>(to_int(value, key));
  } else if (key == "corpus.chars") {
    cfg.chars = value;
  } else if (key == "corpus.char_dur_s") {
    cfg.char_dur_s = to_real(value, key);
  } else if (key == "corpus.gap_s") {
    cfg.gap_s = to_real(value, key);
  } else if (key == "corpus.amp_jitter_db") {
    cfg.amp_jitter_db = to_real(value, key);
  } else if (key == "corpus.bed_snr_db") {
    cfg.bed_snr_db = to_real(value, key);
  } else if (key == "feat.n_fft") {
    cfg.feat.n_fft = static_cast<int>(to_int(value, key));
  } else if (key == "feat.hop") {
    cfg.feat.hop = static_cast<int>(to_int(value, key));
  } else if (key == "feat.n_mels") {
    cfg.feat.n_mels = static_cast<int>(to_int(value, key));
    cfg.model.n_mels = cfg.feat.n_mels;
  } else if (key == "feat.f_min_hz") {
    cfg.feat.f_min_hz = to_real(value, key);
  } else if (key == "feat.f_max_hz") {
    cfg.feat.f_max_hz = to_real(value, key);
  } else if (key == "feat.log_floor") {
    cfg.feat.log_floor = to_real(value, key);
  } else if (key == "feat.log_offset") {
    cfg.feat.log_offset = to_real(value, key);
  } else if (key == "feat.log_scale") {
    cfg.feat.log_scale = to_real(value, key);
  } else if (key == "feat.gl_iters") {
    cfg.feat.gl_iters = static_cast<int>(to_int(value, key));
  } else if (key == "model.enc_hidden") {
    cfg.model.enc_hidden = static_cast<int>(to_int(value, key));
  } else if (key == "model.dec_hidden") {
    cfg.model.dec_hidden = static_cast<int>(to_int(value, key));
  } else if (key == "model.embed_dim") {
    cfg.model.embed_dim = static_cast<int>(to_int(value, key));
  } else if (key == "model.att_dim") {
    cfg.model.att_dim = static_cast<int>(to_int(value, key));
  } else if (key == "model.alpha") {
    cfg.model.alpha = to_real(value, key);
  } else if (key == "model.max_decode_len") {
    cfg.model.max_decode_len = static_cast<int>(to_int(value, key));
  } else if (key == "train.epochs") {
    cfg.train.epochs = static_cast<int>(to_int(value, key));
  } else if (key == "train.lr") {
    cfg.train.lr = to_real(value, key);
  } else if (key == "train.batch_size") {
    cfg.train.batch_size = static_cast<int>(to_int(value, key));
  } else if (key == "train.grad_clip") {
    cfg.train.grad_clip = to_real(value, key);
  } else if (key == "attack.epsilon") {
    cfg.attack.epsilon = to_real(value, key);
  } else if (key == "attack.window_len") {
    cfg.attack.window_len = static_cast<int>(to_int(value, key));
  } else if (key == "attack.stride") {
    cfg.attack.stride = static_cast<int>(to_int(value, key));
  } else if (key == "attack.loss_kind") {
    cfg.attack.loss_kind = asr::parse_loss_kind(value);
  } else if (key == "codec.levels") {
    cfg.levels = split_csv(value);
  } else if (key == "codec.defense") {
    cfg.defense_level = value;
  } else if (key == "codec.external_encode") {
    cfg.external_encode = value;
  } else if (key == "codec.external_decode") {
    cfg.external_decode = value;
  } else if (key == "noise.kinds") {
    cfg.noise_kinds = split_csv(value);
  } else if (key == "noise.snrs_db") {
    cfg.noise_snrs_db.clear();
    for (const std::string& s : split_csv(value)) cfg.noise_snrs_db.push_back(to_real(s, key));
  } else {
    fail(ErrorCode::kInvalidConfig, "unknown config key: " + key);
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  require(is.is_open(), ErrorCode::kNotFound, "config not found: " + path);
  ExperimentConfig cfg = default_config();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::kInvalidConfig,
            "config line " + std::to_string(line_no) + " is not `key = value`");
    apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::vector<std::string> lines;
  auto kv = [&](const std::string& k, const std::string& v) { lines.push_back(k + " = " + v); };
  kv("seed", std::to_string(c.seed));
  kv("jobs", std::to_string(c.jobs));
  kv("corpus.n_train", std::to_string(c.n_train));
  kv("corpus.n_test", std::to_string(c.n_test));
  kv("corpus.n_babble", std::to_string(c.n_babble));
  kv("corpus.min_len", std::to_string(c.min_len));
  kv("corpus.max_len", std::to_string(c.max_len));
  kv("corpus.chars", c.chars);
  kv("corpus.char_dur_s", fmt_real(c.char_dur_s));
  kv("corpus.gap_s", fmt_real(c.gap_s));
  kv("corpus.amp_jitter_db", fmt_real(c.amp_jitter_db));
  kv("corpus.bed_snr_db", fmt_real(c.bed_snr_db));
  kv("feat.n_fft", std::to_string(c.feat.n_fft));
  kv("feat.hop", std::to_string(c.feat.hop));
  kv("feat.n_mels", std::to_string(c.feat.n_mels));
  kv("feat.f_min_hz", fmt_real(c.feat.f_min_hz));
  kv("feat.f_max_hz", fmt_real(c.feat.f_max_hz));
  kv("feat.log_floor", fmt_real(c.feat.log_floor));
  kv("feat.log_offset", fmt_real(c.feat.log_offset));
  kv("feat.log_scale", fmt_real(c.feat.log_scale));
  kv("feat.gl_iters", std::to_string(c.feat.gl_iters));
  kv("model.enc_hidden", std::to_string(c.model.enc_hidden));
  kv("model.dec_hidden", std::to_string(c.model.dec_hidden));
  kv("model.embed_dim", std::to_string(c.model.embed_dim));
  kv("model.att_dim", std::to_string(c.model.att_dim));
  kv("model.alpha", fmt_real(c.model.alpha));
  kv("model.max_decode_len", std::to_string(c.model.max_decode_len));
  kv("train.epochs", std::to_string(c.train.epochs));
  kv("train.lr", fmt_real(c.train.lr));
  kv("train.batch_size", std::to_string(c.train.batch_size));
  kv("train.grad_clip", fmt_real(c.train.grad_clip));
  kv("attack.epsilon", fmt_real(c.attack.epsilon));
  kv("attack.window_len", std::to_string(c.attack.window_len));
  kv("attack.stride", std::to_string(c.attack.stride));
  kv("attack.loss_kind", asr::loss_kind_name(c.attack.loss_kind));
  {
    std::string joined;
    for (const std::string& l : c.levels) joined += (joined.empty() ? "" : ",") + l;
    kv("codec.levels", joined);
  }
  kv("codec.defense", c.defense_level);
  kv("codec.external_encode", c.external_encode);
  kv("codec.external_decode", c.external_decode);
  {
    std::string joined;
    for (const std::string& k : c.noise_kinds) joined += (joined.empty() ? "" : ",") + k;
    kv("noise.kinds", joined);
  }
  {
    std::string joined;
    for (double s : c.noise_snrs_db) joined += (joined.empty() ? "" : ",") + fmt_real(s);
    kv("noise.snrs_db", joined);
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace aaekit::pipeline

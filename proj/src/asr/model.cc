// src/asr/model.cc

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

#include "aaekit/asr/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"

namespace aaekit::asr {

void ModelConfig::validate() const {
  require(n_mels >= 1 && enc_hidden >= 1 && dec_hidden >= 1 && embed_dim >= 1 && att_dim >= 1,
          ErrorCode::kInvalidConfig, "model dimensions must be positive");
  require(enc_kernel >= 1 && att_conv_channels >= 1 && att_conv_kernel >= 1,
          ErrorCode::kInvalidConfig, "kernel sizes must be positive");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::kInvalidConfig, "alpha must lie in [0,1]");
  require(max_decode_len >= 1, ErrorCode::kInvalidConfig, "max_decode_len must be positive");
}

LossKind parse_loss_kind(const std::string& name) {
  if (name == "attention-ce") return LossKind::kAttentionCe;
  if (name == "hybrid") return LossKind::kHybrid;
  fail(ErrorCode::kInvalidArgument, "unknown loss kind: " + name);
}

const char* loss_kind_name(LossKind kind) {
  return kind == LossKind::kAttentionCe ? "attention-ce" : "hybrid";
}

Eigen::MatrixXd& ParamStore::at(const std::string& name) {
  for (auto& [n, m] : items) {
    if (n == name) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown parameter: " + name);
}

const Eigen::MatrixXd& ParamStore::at(const std::string& name) const {
  for (const auto& [n, m] : items) {
    if (n == name) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown parameter: " + name);
}

std::size_t ParamStore::total_size() const {
  std::size_t n = 0;
  for (const auto& [name, m] : items) n += static_cast<std::size_t>(m.size());
  return n;
}

AsrModel::AsrModel(ModelConfig cfg, Vocabulary vocab, std::uint64_t seed)
    : cfg_(cfg), vocab_(std::move(vocab)) {
  cfg_.validate();
  register_params(seed);
}

void AsrModel::register_params(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x70617261));
  auto add = [&](const std::string& name, Eigen::Index rows, Eigen::Index cols,
                 double fan_in) {
    Eigen::MatrixXd m(rows, cols);
    double scale = 1.0 / std::sqrt(std::max(1.0, fan_in));
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * rng.gaussian();
    }
    params_.items.emplace_back(name, std::move(m));
  };
  auto add_zeros = [&](const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    params_.items.emplace_back(name, Eigen::MatrixXd::Zero(rows, cols));
  };

  const int v = vocab_.size();
  const int h = cfg_.enc_hidden;
  const int d = cfg_.dec_hidden;
  const int gin = cfg_.embed_dim + h;

  add("enc1.w", h, cfg_.n_mels * cfg_.enc_kernel, cfg_.n_mels * cfg_.enc_kernel);
  add_zeros("enc1.b", h, 1);
  add("enc2.w", h, h * cfg_.enc_kernel, h * cfg_.enc_kernel);
  add_zeros("enc2.b", h, 1);
  add("ctc.w", v, h, h);
  add_zeros("ctc.b", v, 1);
  add("embed", cfg_.embed_dim, v, cfg_.embed_dim);
  add("att.wh", cfg_.att_dim, h, h);
  add("att.ws", cfg_.att_dim, d, d);
  add("att.wf", cfg_.att_dim, cfg_.att_conv_channels, cfg_.att_conv_channels);
  add_zeros("att.b", cfg_.att_dim, 1);
  add("att.v", cfg_.att_dim, 1, cfg_.att_dim);
  add("att.conv_w", cfg_.att_conv_channels, cfg_.att_conv_kernel, cfg_.att_conv_kernel);
  add_zeros("att.conv_b", cfg_.att_conv_channels, 1);
  for (const char* gate : {"r", "z", "n"}) {
    add(std::string("gru.w") + gate, d, gin, gin);
    add(std::string("gru.u") + gate, d, d, d);
    add_zeros(std::string("gru.b") + gate, d, 1);
  }
  add("out.w", v, d + h, d + h);
  add_zeros("out.b", v, 1);
}

void AsrModel::check_targets(const std::vector<int>& y) const {
  require(!y.empty(), ErrorCode::kInvalidArgument, "target token sequence is empty");
  for (int tok : y) {
    require(vocab_.is_char(tok), ErrorCode::kInvalidArgument,
            "targets must be character tokens");
  }
}

std::size_t AsrModel::encoded_frames(std::size_t t_in) const {
  const int pad = cfg_.enc_kernel / 2;
  auto out = [&](std::size_t t, int stride) -> std::size_t {
    std::ptrdiff_t n = (static_cast<std::ptrdiff_t>(t) + 2 * pad - cfg_.enc_kernel) / stride + 1;
    return n > 0 ? static_cast<std::size_t>(n) : 0;
  };
  return out(out(t_in, 2), 1);
}

LossGraph AsrModel::build_loss_graph(const feat::LogMelFeatures& x, const std::vector<int>& y,
                                     bool input_grad, bool param_grad, bool with_ctc) const {
  check_targets(y);
  require(x.dim() == static_cast<std::size_t>(cfg_.n_mels), ErrorCode::kInvalidArgument,
          "feature dimension does not match the model");

  LossGraph g;
  g.tape = std::make_unique<Tape>();
  Tape& t = *g.tape;

  for (const auto& [name, m] : params_.items) {
    g.param_leaves.emplace_back(name, t.leaf(m, param_grad));
  }
  auto P = [&](const std::string& name) -> Tape::Var {
    for (const auto& [n, v] : g.param_leaves) {
      if (n == name) return v;
    }
    fail(ErrorCode::kInvalidArgument, "unknown parameter leaf: " + name);
  };

  g.input = t.leaf(x.values.transpose(), input_grad);

  const int pad = cfg_.enc_kernel / 2;
  Tape::Var h1 = t.tanh_op(t.conv1d(P("enc1.w"), P("enc1.b"), g.input, cfg_.enc_kernel, 2, pad));
  Tape::Var enc = t.tanh_op(t.conv1d(P("enc2.w"), P("enc2.b"), h1, cfg_.enc_kernel, 1, pad));
  const Eigen::Index t_enc = t.value(enc).cols();

  if (with_ctc) {
    Tape::Var ctc_logits = t.broadcast_col_add(t.matmul(P("ctc.w"), enc), P("ctc.b"));
    g.ctc_term = t.ctc_nll(ctc_logits, y, vocab_.blank_id());
    g.has_ctc = true;
  }

  Tape::Var wh = t.matmul(P("att.wh"), enc);
  Tape::Var state = t.leaf(Eigen::MatrixXd::Zero(cfg_.dec_hidden, 1), false);
  Tape::Var a_prev = t.leaf(
      Eigen::MatrixXd::Constant(t_enc, 1, 1.0 / static_cast<double>(t_enc)), false);

  const int label_len = static_cast<int>(y.size());
  for (int l = 0; l <= label_len; ++l) {
    const int prev_tok = l == 0 ? vocab_.sos_id() : y[static_cast<std::size_t>(l - 1)];
    Tape::Var f = t.conv1d(P("att.conv_w"), P("att.conv_b"), t.transpose(a_prev),
                           cfg_.att_conv_kernel, 1, cfg_.att_conv_kernel / 2);
    Tape::Var sproj = t.add(t.matmul(P("att.ws"), state), P("att.b"));
    Tape::Var e_pre = t.tanh_op(t.broadcast_col_add(t.add(wh, t.matmul(P("att.wf"), f)), sproj));
    Tape::Var att = t.softmax_col(t.matmul(t.transpose(e_pre), P("att.v")));
    Tape::Var ctx = t.matmul(enc, att);

    Tape::Var emb = t.slice_col(P("embed"), prev_tok);
    Tape::Var gin = t.concat_rows(emb, ctx);
    Tape::Var r = t.sigmoid(t.add(t.add(t.matmul(P("gru.wr"), gin), t.matmul(P("gru.ur"), state)),
                                  P("gru.br")));
    Tape::Var z = t.sigmoid(t.add(t.add(t.matmul(P("gru.wz"), gin), t.matmul(P("gru.uz"), state)),
                                  P("gru.bz")));
    Tape::Var n = t.tanh_op(t.add(
        t.add(t.matmul(P("gru.wn"), gin), t.hadamard(r, t.matmul(P("gru.un"), state))),
        P("gru.bn")));
    state = t.add(t.hadamard(t.affine(z, -1.0, 1.0), n), t.hadamard(z, state));

    Tape::Var logits = t.add(t.matmul(P("out.w"), t.concat_rows(state, ctx)), P("out.b"));
    Tape::Var lp = t.log_softmax_col(logits);
    const int target = l < label_len ? y[static_cast<std::size_t>(l)] : vocab_.eos_id();
    Tape::Var term = t.pick_neg(lp, target);
    if (l < label_len) {
      g.att_terms.push_back(term);
    } else {
      g.att_eos_term = term;
    }
    a_prev = att;
  }
  return g;
}

Tape::Var LossGraph::attention_nll() const {
  Tape::Var acc = att_terms.empty() ? att_eos_term : att_terms[0];
  for (std::size_t i = 1; i < att_terms.size(); ++i) acc = tape->add(acc, att_terms[i]);
  if (!att_terms.empty()) acc = tape->add(acc, att_eos_term);
  return acc;
}

Tape::Var LossGraph::hybrid(double alpha) const {
  require(has_ctc, ErrorCode::kInvalidArgument, "graph was built without its CTC term");
  return tape->add_scaled(ctc_term, alpha, attention_nll(), 1.0 - alpha);
}

double AsrModel::hybrid_loss(const feat::LogMelFeatures& x, const std::vector<int>& y) const {
  LossGraph g = build_loss_graph(x, y, false, false);
  return g.tape->scalar(g.hybrid(cfg_.alpha));
}

double AsrModel::ctc_loss(const feat::LogMelFeatures& x, const std::vector<int>& y) const {
  LossGraph g = build_loss_graph(x, y, false, false);
  return g.tape->scalar(g.ctc_term);
}

double AsrModel::attention_loss(const feat::LogMelFeatures& x, const std::vector<int>& y) const {
  LossGraph g = build_loss_graph(x, y, false, false, false);
  return g.tape->scalar(g.attention_nll());
}

Eigen::MatrixXd AsrModel::input_gradient(const feat::LogMelFeatures& x,
                                         const std::vector<int>& y, LossKind kind) const {
  LossGraph g = build_loss_graph(x, y, true, false, kind == LossKind::kHybrid);
  Tape::Var root =
      kind == LossKind::kHybrid ? g.hybrid(cfg_.alpha) : g.attention_nll();
  g.tape->backward(root);
  return g.tape->grad(g.input).transpose();
}

Eigen::MatrixXd AsrModel::encode_plain(const Eigen::MatrixXd& x_ft) const {
  const int pad = cfg_.enc_kernel / 2;
  auto conv = [&](const Eigen::MatrixXd& w, const Eigen::MatrixXd& b, const Eigen::MatrixXd& in,
                  int stride) {
    const Eigen::Index in_ch = in.rows();
    const Eigen::Index t_in = in.cols();
    const Eigen::Index t_out = (t_in + 2 * pad - cfg_.enc_kernel) / stride + 1;
    require(t_out >= 1, ErrorCode::kTooShort, "utterance too short for the encoder");
    Eigen::MatrixXd out = b.col(0).replicate(1, t_out);
    for (Eigen::Index t = 0; t < t_out; ++t) {
      for (int k = 0; k < cfg_.enc_kernel; ++k) {
        Eigen::Index j = t * stride + k - pad;
        if (j < 0 || j >= t_in) continue;
        out.col(t).noalias() += w.middleCols(k * in_ch, in_ch) * in.col(j);
      }
    }
    return Eigen::MatrixXd(out.array().tanh());
  };
  Eigen::MatrixXd h1 = conv(params_.at("enc1.w"), params_.at("enc1.b"), x_ft, 2);
  return conv(params_.at("enc2.w"), params_.at("enc2.b"), h1, 1);
}

DecodeResult AsrModel::decode_greedy(const feat::LogMelFeatures& x, int max_decode_len) const {
  require(x.dim() == static_cast<std::size_t>(cfg_.n_mels), ErrorCode::kInvalidArgument,
          "feature dimension does not match the model");
  const int cap = max_decode_len > 0 ? max_decode_len : cfg_.max_decode_len;

  Eigen::MatrixXd enc = encode_plain(x.values.transpose());
  const Eigen::Index t_enc = enc.cols();
  Eigen::MatrixXd wh = params_.at("att.wh") * enc;

  const Eigen::MatrixXd& conv_w = params_.at("att.conv_w");
  const Eigen::MatrixXd& conv_b = params_.at("att.conv_b");
  const int ck = cfg_.att_conv_kernel, cpad = cfg_.att_conv_kernel / 2;

  Eigen::VectorXd state = Eigen::VectorXd::Zero(cfg_.dec_hidden);
  Eigen::VectorXd a_prev =
      Eigen::VectorXd::Constant(t_enc, 1.0 / static_cast<double>(t_enc));
  int prev_tok = vocab_.sos_id();

  DecodeResult res;
  for (int step = 0; step < cap; ++step) {
    Eigen::MatrixXd f = conv_b.col(0).replicate(1, t_enc);
    for (Eigen::Index t = 0; t < t_enc; ++t) {
      for (int k = 0; k < ck; ++k) {
        Eigen::Index j = t + k - cpad;
        if (j < 0 || j >= t_enc) continue;
        f.col(t).noalias() += conv_w.col(k) * a_prev(j);
      }
    }
    Eigen::VectorXd sproj = params_.at("att.ws") * state + params_.at("att.b").col(0);
    Eigen::MatrixXd e_pre =
        ((wh + params_.at("att.wf") * f).colwise() + sproj).array().tanh();
    Eigen::VectorXd scores = e_pre.transpose() * params_.at("att.v").col(0);
    Eigen::VectorXd att = (scores.array() - scores.maxCoeff()).exp();
    att /= att.sum();
    Eigen::VectorXd ctx = enc * att;

    Eigen::VectorXd gin(cfg_.embed_dim + cfg_.enc_hidden);
    gin.head(cfg_.embed_dim) = params_.at("embed").col(prev_tok);
    gin.tail(cfg_.enc_hidden) = ctx;
    auto gate = [&](const char* wn, const char* un, const char* bn) -> Eigen::ArrayXd {
      return (params_.at(wn) * gin + params_.at(un) * state + params_.at(bn).col(0)).array();
    };
    Eigen::ArrayXd r = 1.0 / (1.0 + (-gate("gru.wr", "gru.ur", "gru.br")).exp());
    Eigen::ArrayXd z = 1.0 / (1.0 + (-gate("gru.wz", "gru.uz", "gru.bz")).exp());
    Eigen::ArrayXd n = (params_.at("gru.wn") * gin).array() +
                       r * (params_.at("gru.un") * state).array() +
                       params_.at("gru.bn").col(0).array();
    n = n.tanh();
    state = ((1.0 - z) * n + z * state.array()).matrix();

    Eigen::VectorXd oin(cfg_.dec_hidden + cfg_.enc_hidden);
    oin.head(cfg_.dec_hidden) = state;
    oin.tail(cfg_.enc_hidden) = ctx;
    Eigen::VectorXd logits = params_.at("out.w") * oin + params_.at("out.b").col(0);

    double m = logits.maxCoeff();
    double lse = m + std::log((logits.array() - m).exp().sum());

    logits(vocab_.blank_id()) = -std::numeric_limits<double>::infinity();
    logits(vocab_.sos_id()) = -std::numeric_limits<double>::infinity();
    Eigen::Index best;
    logits.maxCoeff(&best);
    res.log_score += logits(best) - lse;

    if (static_cast<int>(best) == vocab_.eos_id()) break;
    res.tokens.push_back(static_cast<int>(best));
    prev_tok = static_cast<int>(best);
    a_prev = att;
  }
  return res;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  require(static_cast<bool>(is), ErrorCode::kIoError, "truncated checkpoint");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  require(static_cast<bool>(is), ErrorCode::kIoError, "truncated checkpoint");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

constexpr char kMagic[4] = {'A', 'A', 'E', 'K'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void AsrModel::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  require(os.is_open(), ErrorCode::kIoError, "cannot open checkpoint for writing: " + path);
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  for (int v : {cfg_.n_mels, cfg_.enc_hidden, cfg_.enc_kernel, cfg_.dec_hidden, cfg_.embed_dim,
                cfg_.att_dim, cfg_.att_conv_channels, cfg_.att_conv_kernel, cfg_.max_decode_len}) {
    put_u32(os, static_cast<std::uint32_t>(v));
  }
  put_f64(os, cfg_.alpha);
  put_u32(os, static_cast<std::uint32_t>(vocab_.chars().size()));
  os.write(vocab_.chars().data(), static_cast<std::streamsize>(vocab_.chars().size()));

  put_u32(os, static_cast<std::uint32_t>(params_.items.size()));
  for (const auto& [name, m] : params_.items) {
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(os, static_cast<std::uint32_t>(m.rows()));
    put_u32(os, static_cast<std::uint32_t>(m.cols()));
    std::vector<float> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] =
          static_cast<float>(m(r, c));
      os.write(reinterpret_cast<const char*>(row.data()),
               static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  require(static_cast<bool>(os), ErrorCode::kIoError, "short checkpoint write: " + path);
}

AsrModel AsrModel::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.is_open(), ErrorCode::kNotFound, "checkpoint not found: " + path);
  char magic[4];
  is.read(magic, 4);
  require(static_cast<bool>(is) && std::memcmp(magic, kMagic, 4) == 0,
          ErrorCode::kUnsupportedFormat, "not a model checkpoint: " + path);
  require(get_u32(is) == kVersion, ErrorCode::kUnsupportedFormat,
          "unsupported checkpoint version");

  ModelConfig cfg;
  cfg.n_mels = static_cast<int>(get_u32(is));
  cfg.enc_hidden = static_cast<int>(get_u32(is));
  cfg.enc_kernel = static_cast<int>(get_u32(is));
  cfg.dec_hidden = static_cast<int>(get_u32(is));
  cfg.embed_dim = static_cast<int>(get_u32(is));
  cfg.att_dim = static_cast<int>(get_u32(is));
  cfg.att_conv_channels = static_cast<int>(get_u32(is));
  cfg.att_conv_kernel = static_cast<int>(get_u32(is));
  cfg.max_decode_len = static_cast<int>(get_u32(is));
  cfg.alpha = get_f64(is);

  std::uint32_t n_chars = get_u32(is);
  std::string chars(n_chars, '\0');
  is.read(chars.data(), n_chars);
  require(static_cast<bool>(is), ErrorCode::kIoError, "truncated checkpoint");

  AsrModel m;
  m.cfg_ = cfg;
  m.cfg_.validate();
  m.vocab_ = Vocabulary(chars);

  std::uint32_t n_tensors = get_u32(is);
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::uint32_t name_len = get_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    std::uint32_t rows = get_u32(is);
    std::uint32_t cols = get_u32(is);
    Eigen::MatrixXd t(rows, cols);
    std::vector<float> row(cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      is.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
      require(static_cast<bool>(is), ErrorCode::kIoError, "truncated checkpoint tensor");
      for (std::uint32_t c = 0; c < cols; ++c) t(r, c) = row[c];
    }
    m.params_.items.emplace_back(name, std::move(t));
  }
  return m;
}

}  // namespace aaekit::asr

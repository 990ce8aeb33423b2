// src/pipeline/experiment.cc

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

#include "aaekit/pipeline/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aaekit/asr/manifest.hpp"
#include "aaekit/asr/synth.hpp"
#include "aaekit/asr/train.hpp"
#include "aaekit/attack/fgsm.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/common/parallel.hpp"
#include "aaekit/common/rng.hpp"
#include "aaekit/metrics/metrics.hpp"
#include "aaekit/noise/noise.hpp"

namespace aaekit::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kCorpusTag = 0x636f7270;  // corpus synthesis
constexpr std::uint64_t kModelTag = 0x6d6f646c;   // per-level model init/shuffle
constexpr std::uint64_t kBabbleTag = 0x62616262;  // babble source bank
constexpr std::uint64_t kNoiseTag = 0x6e6f6973;   // noise-grid draws

std::string num(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

void ensure_dir(const std::string& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  require(!ec, ErrorCode::kIoError, "cannot create directory " + p);
}

bool file_exists(const std::string& p) { return fs::exists(p); }

// All artifacts are written to a sibling temp file and renamed so a killed
// run never leaves a truncated file that resume would trust.
void write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    require(os.is_open(), ErrorCode::kIoError, "cannot write " + tmp);
    os << content;
    require(os.good(), ErrorCode::kIoError, "short write to " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  require(!ec, ErrorCode::kIoError, "cannot move " + tmp + " into place");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.is_open(), ErrorCode::kNotFound, "missing file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s, const std::string& where) {
  try {
    return std::stod(s);
  } catch (...) {
    fail(ErrorCode::kDataError, "bad number '" + s + "' in " + where);
  }
}

// Config-hash guard: the first writer pins the hash, later stages (and later
// runs) must match it exactly.
void check_guard(const ExperimentConfig& cfg, const Paths& p) {
  ensure_dir(p.root);
  const std::string hash = config_hash(cfg);
  if (file_exists(p.hash_file())) {
    const std::string found = trim(read_text(p.hash_file()));
    require(found == hash, ErrorCode::kDataError,
            "output dir " + p.root + " holds artifacts for config " + found +
                ", current config is " + hash);
  } else {
    write_text(p.hash_file(), hash + "\n");
    write_text(p.config_file(), serialize_config(cfg));
  }
}

bool marker_done(const std::string& dir) { return file_exists(dir + "/.done"); }

void mark_done(const std::string& dir) { write_text(dir + "/.done", "ok\n"); }

template <typename Fn>
void run_stage(const char* name, Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + " stage failed; " + e.what());
  }
}

asr::SynthSpec base_synth_spec(const ExperimentConfig& cfg) {
  asr::SynthSpec spec;
  spec.min_len = cfg.min_len;
  spec.max_len = cfg.max_len;
  spec.chars = cfg.chars;
  spec.char_dur_s = cfg.char_dur_s;
  spec.gap_s = cfg.gap_s;
  spec.amp_jitter_db = cfg.amp_jitter_db;
  spec.background_snr_db = cfg.bed_snr_db;
  return spec;
}

std::vector<asr::ManifestEntry> load_split(const Paths& p, const std::string& split) {
  const std::string path = p.manifest(split);
  require(file_exists(path), ErrorCode::kNotFound,
          "corpus manifest " + path + " missing (run synth-corpus first)");
  return asr::read_manifest(path);
}

asr::AsrModel load_model(const Paths& p, const std::string& level) {
  const std::string path = p.checkpoint(level);
  require(file_exists(path), ErrorCode::kNotFound,
          "checkpoint " + path + " missing (run train first)");
  return asr::AsrModel::load(path);
}

struct DecodeRow {
  std::string id;
  std::string ref;
  std::string hyp;
  double cer = 0.0;
};

void write_decode_csv(const std::string& path, const std::vector<DecodeRow>& rows) {
  std::string out = "utt_id,ref,hyp,cer\n";
  for (const DecodeRow& r : rows) {
    out += r.id + "," + r.ref + "," + r.hyp + "," + num(r.cer, "%.6f") + "\n";
  }
  write_text(path, out);
}

std::vector<DecodeRow> read_decode_csv(const std::string& path) {
  std::istringstream is(read_text(path));
  std::string line;
  std::vector<DecodeRow> rows;
  bool header = true;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = split_fields(line);
    require(f.size() == 4, ErrorCode::kDataError, "bad row in " + path);
    rows.push_back({f[0], f[1], f[2], parse_num(f[3], path)});
  }
  require(!rows.empty(), ErrorCode::kDataError, "no rows in " + path);
  return rows;
}

double mean_cer_percent(const std::string& path) {
  const auto rows = read_decode_csv(path);
  double sum = 0.0;
  for (const DecodeRow& r : rows) sum += r.cer;
  return sum / static_cast<double>(rows.size()) * 100.0;
}

DecodeRow decode_one(const asr::AsrModel& model, const feat::LogMelFeatures& x,
                     const std::string& id, const std::string& ref) {
  const asr::DecodeResult res = model.decode_greedy(x);
  DecodeRow row;
  row.id = id;
  row.ref = ref;
  row.hyp = model.vocab().decode_string(res.tokens);
  row.cer = metrics::cer(ref, row.hyp);
  return row;
}

std::vector<audio::Waveform> make_babble_bank(const ExperimentConfig& cfg) {
  asr::SynthSpec spec = base_synth_spec(cfg);
  spec.n_utts = cfg.n_babble;
  spec.min_len = cfg.max_len;  // long sources so offsets rarely wrap
  spec.seed = derive_seed(cfg.seed, kBabbleTag);
  std::vector<audio::Waveform> bank;
  for (auto& u : asr::synth_corpus(spec, "babble")) bank.push_back(std::move(u.audio));
  return bank;
}

std::uint64_t level_seed(const ExperimentConfig& cfg, std::size_t level_idx) {
  return derive_seed(derive_seed(cfg.seed, kModelTag), level_idx);
}

}  // namespace

std::string Paths::level_wav(const std::string& level, const std::string& id) const {
  if (level == "uncompressed") return corpus_wav_dir() + "/" + id + ".wav";
  return level_dir(level) + "/wav/" + id + ".wav";
}

std::string Paths::noise_csv(const std::string& kind, double snr_db, bool compressed) const {
  return root + "/noise/" + kind + "_snr" + num(snr_db, "%g") +
         (compressed ? "_compressed" : "_plain") + ".csv";
}

void stage_synth_corpus(const ExperimentConfig& cfg) {
  run_stage("synth-corpus", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    if (marker_done(p.corpus_dir())) return;
    ensure_dir(p.corpus_wav_dir());

    auto build_split = [&](const std::string& split, int n, std::uint64_t salt) {
      asr::SynthSpec spec = base_synth_spec(cfg);
      spec.n_utts = n;
      spec.seed = derive_seed(cfg.seed, kCorpusTag + salt);
      auto utts = asr::synth_corpus(spec, split);
      std::vector<asr::ManifestEntry> entries;
      for (const auto& u : utts) {
        audio::write_wav(u.audio, p.corpus_wav_dir() + "/" + u.id + ".wav");
        entries.push_back({u.id, "wav/" + u.id + ".wav", u.transcript});
      }
      asr::write_manifest(p.manifest(split), entries);
    };
    build_split("train", cfg.n_train, 0);
    build_split("test", cfg.n_test, 1);
    mark_done(p.corpus_dir());
  });
}

void stage_compress_corpus(const ExperimentConfig& cfg) {
  run_stage("compress-corpus", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    std::vector<asr::ManifestEntry> entries = load_split(p, "train");
    for (const auto& e : load_split(p, "test")) entries.push_back(e);

    for (const std::string& level : cfg.levels) {
      if (level == "uncompressed") continue;
      if (marker_done(p.level_dir(level))) continue;
      const codec::CodecSpec spec = cfg.level_codec(level);
      ensure_dir(p.level_dir(level) + "/wav");
      parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
        const std::string out = p.level_wav(level, entries[i].id);
        if (file_exists(out)) return;
        const audio::Waveform w = audio::read_wav(entries[i].audio_path);
        audio::write_wav(codec::roundtrip(w, spec), out);
      });
      mark_done(p.level_dir(level));
    }
  });
}

void stage_train(const ExperimentConfig& cfg) {
  run_stage("train", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    const auto entries = load_split(p, "train");
    const asr::Vocabulary vocab(cfg.chars);
    ensure_dir(p.root + "/models");

    // Besides the level audio itself, every model trains on its feature
    // inversion and on the defense codec's roundtrip of that inversion, so
    // the benign artifacts of both downstream paths are in-distribution and
    // the decode deltas isolate the adversarial content.
    const codec::CodecSpec defense = cfg.defense_codec();
    for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
      const std::string& level = cfg.levels[li];
      if (file_exists(p.checkpoint(level)) && file_exists(p.train_log(level))) continue;

      std::vector<asr::TrainUtterance> data(3 * entries.size());
      parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
        const audio::Waveform w = audio::read_wav(p.level_wav(level, entries[i].id));
        const auto tokens = vocab.encode(entries[i].transcript);
        feat::LogMelFeatures x = feat::extract_logmel(w, cfg.feat);
        const audio::Waveform recon = feat::invert_logmel(x);
        const audio::Waveform rt = codec::roundtrip(recon, defense);
        data[3 * i] = {entries[i].id, std::move(x), tokens};
        data[3 * i + 1] = {entries[i].id + "#inv", feat::extract_logmel(recon, cfg.feat), tokens};
        data[3 * i + 2] = {entries[i].id + "#rt", feat::extract_logmel(rt, cfg.feat), tokens};
      });

      const std::uint64_t seed = level_seed(cfg, li);
      asr::AsrModel model(cfg.model, vocab, derive_seed(seed, 0));
      asr::TrainConfig tcfg = cfg.train;
      tcfg.seed = derive_seed(seed, 1);
      const asr::TrainLog log = asr::train(model, data, tcfg);

      model.save(p.checkpoint(level) + ".tmp");
      std::error_code ec;
      fs::rename(p.checkpoint(level) + ".tmp", p.checkpoint(level), ec);
      require(!ec, ErrorCode::kIoError, "cannot finalize checkpoint for " + level);

      std::string csv = "epoch,mean_loss\n";
      for (std::size_t e = 0; e < log.epoch_loss.size(); ++e) {
        csv += std::to_string(e + 1) + "," + num(log.epoch_loss[e], "%.6f") + "\n";
      }
      write_text(p.train_log(level), csv);
    }
  });
}

void stage_attack(const ExperimentConfig& cfg) {
  run_stage("attack", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    const auto entries = load_split(p, "test");
    const asr::Vocabulary vocab(cfg.chars);

    for (const std::string& level : cfg.levels) {
      if (marker_done(p.attack_dir(level))) continue;
      const asr::AsrModel model = load_model(p, level);
      ensure_dir(p.attack_dir(level));
      parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
        if (file_exists(p.attack_dir(level) + "/" + entries[i].id + ".json")) return;
        const audio::Waveform w = audio::read_wav(p.level_wav(level, entries[i].id));
        const feat::LogMelFeatures x = feat::extract_logmel(w, cfg.feat);
        attack::AdversarialRecord rec = attack::generate_adversarial(model, x, cfg.attack);
        rec.utt_id = entries[i].id;
        rec.ground_truth = vocab.encode(entries[i].transcript);
        attack::save_record(rec, cfg.attack, p.attack_dir(level));
      });
      mark_done(p.attack_dir(level));
    }
  });
}

void stage_invert(const ExperimentConfig& cfg) {
  run_stage("invert", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    const auto entries = load_split(p, "test");

    for (const std::string& level : cfg.levels) {
      const std::string dir = p.root + "/invert/" + level;
      if (marker_done(dir)) continue;
      require(marker_done(p.attack_dir(level)), ErrorCode::kNotFound,
              "attack records for level " + level + " missing (run attack first)");
      ensure_dir(dir + "/raae");
      ensure_dir(dir + "/recon");
      parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
        const std::string& id = entries[i].id;
        if (file_exists(p.raae_wav(level, id)) && file_exists(p.recon_wav(level, id))) return;
        const attack::AdversarialRecord rec = attack::load_record(p.attack_dir(level), id);
        audio::write_wav(feat::invert_logmel(rec.adv_features), p.raae_wav(level, id));
        audio::write_wav(feat::invert_logmel(rec.clean_features), p.recon_wav(level, id));
      });
      mark_done(dir);
    }
  });
}

void stage_defend(const ExperimentConfig& cfg) {
  run_stage("defend", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    const auto entries = load_split(p, "test");
    const codec::CodecSpec spec = cfg.defense_codec();

    for (const std::string& level : cfg.levels) {
      const std::string dir = p.root + "/defend/" + level;
      if (marker_done(dir)) continue;
      ensure_dir(dir);
      parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
        const std::string& id = entries[i].id;
        if (file_exists(p.defended_wav(level, id))) return;
        const audio::Waveform raae = audio::read_wav(p.raae_wav(level, id));
        audio::write_wav(codec::roundtrip(raae, spec), p.defended_wav(level, id));
      });
      mark_done(dir);
    }
  });
}

void stage_decode(const ExperimentConfig& cfg) {
  run_stage("decode", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    const auto entries = load_split(p, "test");
    const std::vector<std::string> conds = {"a", "b", "c", "d", "recon"};

    for (const std::string& level : cfg.levels) {
      bool all_done = true;
      for (const std::string& c : conds) all_done &= file_exists(p.decode_csv(level, c));
      if (all_done) continue;

      const asr::AsrModel model = load_model(p, level);
      ensure_dir(p.root + "/decode/" + level);
      for (const std::string& cond : conds) {
        if (file_exists(p.decode_csv(level, cond))) continue;
        std::vector<DecodeRow> rows(entries.size());
        parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
          const std::string& id = entries[i].id;
          feat::LogMelFeatures x;
          if (cond == "b") {
            x = attack::load_record(p.attack_dir(level), id).adv_features;
          } else {
            std::string wav = cond == "a"   ? p.level_wav(level, id)
                              : cond == "c" ? p.raae_wav(level, id)
                              : cond == "d" ? p.defended_wav(level, id)
                                            : p.recon_wav(level, id);
            x = feat::extract_logmel(audio::read_wav(wav), cfg.feat);
          }
          rows[i] = decode_one(model, x, id, entries[i].transcript);
        });
        write_decode_csv(p.decode_csv(level, cond), rows);
      }
    }

    // Regular-noise grid, decoded by the first configured model over the
    // first level's test audio; the compressed variant round-trips the noisy
    // waveform through the defense codec.
    const std::string& level0 = cfg.levels.front();
    bool grid_done = true;
    for (const std::string& kind : cfg.noise_kinds)
      for (double snr : cfg.noise_snrs_db)
        for (bool comp : {false, true}) grid_done &= file_exists(p.noise_csv(kind, snr, comp));
    if (grid_done) return;

    const asr::AsrModel model0 = load_model(p, level0);
    const codec::CodecSpec defense = cfg.defense_codec();
    ensure_dir(p.root + "/noise");
    bool need_babble = false;
    for (const std::string& kind : cfg.noise_kinds) {
      need_babble |= noise::parse_noise_kind(kind) == noise::NoiseKind::kBabble;
    }
    const std::vector<audio::Waveform> babble =
        need_babble ? make_babble_bank(cfg) : std::vector<audio::Waveform>{};

    for (std::size_t ki = 0; ki < cfg.noise_kinds.size(); ++ki) {
      const noise::NoiseKind kind = noise::parse_noise_kind(cfg.noise_kinds[ki]);
      for (std::size_t si = 0; si < cfg.noise_snrs_db.size(); ++si) {
        const double snr = cfg.noise_snrs_db[si];
        const std::string plain_csv = p.noise_csv(cfg.noise_kinds[ki], snr, false);
        const std::string comp_csv = p.noise_csv(cfg.noise_kinds[ki], snr, true);
        if (file_exists(plain_csv) && file_exists(comp_csv)) continue;

        const std::uint64_t cell_seed =
            derive_seed(derive_seed(cfg.seed, kNoiseTag), ki * 1000 + si);
        std::vector<DecodeRow> plain(entries.size()), comp(entries.size());
        parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
          const audio::Waveform clean =
              audio::read_wav(p.level_wav(level0, entries[i].id));
          const audio::Waveform n = noise::gen_noise(kind, clean.samples.size(),
                                                     derive_seed(cell_seed, i), babble);
          const audio::Waveform noisy = noise::mix_at_snr(clean, n, snr);
          plain[i] = decode_one(model0, feat::extract_logmel(noisy, cfg.feat), entries[i].id,
                                entries[i].transcript);
          const audio::Waveform rt = codec::roundtrip(noisy, defense);
          comp[i] = decode_one(model0, feat::extract_logmel(rt, cfg.feat), entries[i].id,
                               entries[i].transcript);
        });
        write_decode_csv(plain_csv, plain);
        write_decode_csv(comp_csv, comp);
      }
    }
  });
}

void stage_evaluate(const ExperimentConfig& cfg) {
  run_stage("evaluate", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    if (marker_done(p.eval_dir())) return;
    ensure_dir(p.eval_dir());
    const auto entries = load_split(p, "test");

    std::string cells = "model,condition,cer_percent\n";
    std::string recon = "model,clean_percent,recon_percent\n";
    for (const std::string& level : cfg.levels) {
      for (const std::string& cond : {"a", "b", "c", "d"}) {
        cells += level + "," + cond + "," +
                 num(mean_cer_percent(p.decode_csv(level, cond)), "%.6f") + "\n";
      }
      recon += level + "," + num(mean_cer_percent(p.decode_csv(level, "a")), "%.6f") + "," +
               num(mean_cer_percent(p.decode_csv(level, "recon")), "%.6f") + "\n";
    }
    write_text(p.table1_cells_csv(), cells);
    write_text(p.recon_cells_csv(), recon);

    std::string noise_cells = "kind,snr_db,compressed,cer_percent\n";
    for (const std::string& kind : cfg.noise_kinds) {
      for (double snr : cfg.noise_snrs_db) {
        for (bool comp : {false, true}) {
          noise_cells += kind + "," + num(snr, "%g") + "," + (comp ? "1" : "0") + "," +
                         num(mean_cer_percent(p.noise_csv(kind, snr, comp)), "%.6f") + "\n";
        }
      }
    }
    write_text(p.noise_cells_csv(), noise_cells);

    // Adversarial-noise SNR relative to the clean reconstruction, for the
    // same audio before and after the defense codec.
    std::string before = "utt_id,snr_db\n";
    std::string after = "utt_id,snr_db\n";
    for (const std::string& level : cfg.levels) {
      std::vector<std::pair<double, double>> snrs(entries.size());
      parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
        const std::string& id = entries[i].id;
        const audio::Waveform ref = audio::read_wav(p.recon_wav(level, id));
        const audio::Waveform raae = audio::read_wav(p.raae_wav(level, id));
        const audio::Waveform defended = audio::read_wav(p.defended_wav(level, id));
        snrs[i] = {metrics::snr_adv(ref, raae), metrics::snr_adv(ref, defended)};
      });
      for (std::size_t i = 0; i < entries.size(); ++i) {
        before += level + "/" + entries[i].id + "," + num(snrs[i].first, "%.6f") + "\n";
        after += level + "/" + entries[i].id + "," + num(snrs[i].second, "%.6f") + "\n";
      }
    }
    write_text(p.snr_csv(false), before);
    write_text(p.snr_csv(true), after);
    mark_done(p.eval_dir());
  });
}

namespace {

std::vector<metrics::SnrSample> read_snr_csv(const std::string& path) {
  std::istringstream is(read_text(path));
  std::string line;
  std::vector<metrics::SnrSample> samples;
  bool header = true;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = split_fields(line);
    require(f.size() == 2, ErrorCode::kDataError, "bad row in " + path);
    samples.push_back({f[0], parse_num(f[1], path)});
  }
  return samples;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

EvalReport stage_report(const ExperimentConfig& cfg) {
  EvalReport report;
  run_stage("report", [&] {
    Paths p(cfg.out_dir);
    check_guard(cfg, p);
    ensure_dir(p.report_dir());
    report.config_hash = config_hash(cfg);

    std::vector<CerCell> cells;
    {
      std::istringstream is(read_text(p.table1_cells_csv()));
      std::string line;
      bool header = true;
      while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (header) {
          header = false;
          continue;
        }
        auto f = split_fields(line);
        require(f.size() == 3, ErrorCode::kDataError, "bad row in " + p.table1_cells_csv());
        cells.push_back({f[0], f[1], parse_num(f[2], "table1 cells")});
      }
    }
    report.attack_table = report_table1(cells);
    for (const AttackTableRow& r : report.attack_table.rows) {
      report.clean_cer.emplace_back(r.model, r.a);
    }

    {
      std::istringstream is(read_text(p.recon_cells_csv()));
      std::string line;
      bool header = true;
      while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (header) {
          header = false;
          continue;
        }
        auto f = split_fields(line);
        require(f.size() == 3, ErrorCode::kDataError, "bad row in " + p.recon_cells_csv());
        report.recon_cer.emplace_back(f[0], parse_num(f[2], "recon cells"));
      }
    }

    std::vector<NoiseCell> ncells;
    {
      std::istringstream is(read_text(p.noise_cells_csv()));
      std::string line;
      bool header = true;
      while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (header) {
          header = false;
          continue;
        }
        auto f = split_fields(line);
        require(f.size() == 4, ErrorCode::kDataError, "bad row in " + p.noise_cells_csv());
        ncells.push_back(
            {f[0], parse_num(f[1], "noise cells"), f[2] == "1", parse_num(f[3], "noise cells")});
      }
    }
    report.noise_table = report_noise_table(ncells);

    const auto before = read_snr_csv(p.snr_csv(false));
    const auto after = read_snr_csv(p.snr_csv(true));
    report.histograms =
        export_histograms(before, after, 50, p.hist_csv(false), p.hist_csv(true));

    std::vector<double> before_v, after_v;
    for (const auto& s : before) before_v.push_back(s.snr_db);
    for (const auto& s : after) after_v.push_back(s.snr_db);

    write_text(p.table1_csv(), report.attack_table.to_csv());
    write_text(p.table2_csv(), report.noise_table.to_csv());

    std::string md;
    md += "# Adversarial-noise compression experiment\n\n";
    md += "config hash: " + report.config_hash + "\n";
    md += "seed: " + std::to_string(cfg.seed) + "\n\n";
    md += "## Attack and defense, mean CER (%)\n\n";
    md += report.attack_table.to_markdown();
    md += "\n## Clean-reconstruction control, mean CER (%)\n\n";
    md += "| model | clean | reconstructed |\n|---|---|---|\n";
    for (const auto& [model, cer] : report.recon_cer) {
      double clean = 0.0;
      for (const auto& [m, c] : report.clean_cer)
        if (m == model) clean = c;
      md += "| " + model + " | " + num(clean, "%.2f") + " | " + num(cer, "%.2f") + " |\n";
    }
    md += "\n## Regular noise, model `" + cfg.levels.front() + "`, mean CER (%)\n\n";
    md += report.noise_table.to_markdown();
    md += "\n## Adversarial-noise SNR before/after the defense codec\n\n";
    md += "median before: " + num(median(before_v), "%.3f") + " dB\n";
    md += "median after: " + num(median(after_v), "%.3f") + " dB\n";
    md += "KS raw: D = " + num(report.histograms.raw.statistic, "%.6f") +
          ", p = " + num(report.histograms.raw.p_value, "%.6g") + "\n";
    md += "KS binned: D = " + num(report.histograms.binned.statistic, "%.6f") +
          ", p = " + num(report.histograms.binned.p_value, "%.6g") + "\n";
    write_text(p.report_md(), md);
  });
  return report;
}

EvalReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  stage_synth_corpus(cfg);
  stage_compress_corpus(cfg);
  stage_train(cfg);
  stage_attack(cfg);
  stage_invert(cfg);
  stage_defend(cfg);
  stage_decode(cfg);
  stage_evaluate(cfg);
  return stage_report(cfg);
}

}  // namespace aaekit::pipeline

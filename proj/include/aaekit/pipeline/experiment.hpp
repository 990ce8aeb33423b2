// include/aaekit/pipeline/experiment.hpp

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

#ifndef AAEKIT_PIPELINE_EXPERIMENT_HPP_
#define AAEKIT_PIPELINE_EXPERIMENT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "aaekit/pipeline/config.hpp"
#include "aaekit/pipeline/report.hpp"

namespace aaekit::pipeline {

// Output-directory layout. Everything an experiment produces lives under one
// root; hash.txt pins the config so artifacts from different configs cannot
// be mixed.
struct Paths {
  std::string root;

  explicit Paths(std::string out_dir) : root(std::move(out_dir)) {}

  std::string hash_file() const { return root + "/hash.txt"; }
  std::string config_file() const { return root + "/config.txt"; }

  std::string corpus_dir() const { return root + "/corpus"; }
  std::string corpus_wav_dir() const { return corpus_dir() + "/wav"; }
  std::string manifest(const std::string& split) const {
    return corpus_dir() + "/" + split + ".jsonl";
  }

  std::string level_dir(const std::string& level) const { return root + "/levels/" + level; }
  // Audio of `id` at compression level `level`; "uncompressed" resolves to
  // the raw corpus file.
  std::string level_wav(const std::string& level, const std::string& id) const;

  std::string checkpoint(const std::string& level) const {
    return root + "/models/" + level + ".ckpt";
  }
  std::string train_log(const std::string& level) const {
    return root + "/models/" + level + "_train_log.csv";
  }

  std::string attack_dir(const std::string& level) const { return root + "/attack/" + level; }
  std::string raae_wav(const std::string& level, const std::string& id) const {
    return root + "/invert/" + level + "/raae/" + id + ".wav";
  }
  std::string recon_wav(const std::string& level, const std::string& id) const {
    return root + "/invert/" + level + "/recon/" + id + ".wav";
  }
  std::string defended_wav(const std::string& level, const std::string& id) const {
    return root + "/defend/" + level + "/" + id + ".wav";
  }

  // conditions: "a", "b", "c", "d", plus "recon" for the clean-reconstruction
  // control decode.
  std::string decode_csv(const std::string& level, const std::string& cond) const {
    return root + "/decode/" + level + "/" + cond + ".csv";
  }
  std::string noise_csv(const std::string& kind, double snr_db, bool compressed) const;

  std::string eval_dir() const { return root + "/eval"; }
  std::string table1_cells_csv() const { return eval_dir() + "/table1_cells.csv"; }
  std::string recon_cells_csv() const { return eval_dir() + "/recon_cells.csv"; }
  std::string noise_cells_csv() const { return eval_dir() + "/noise_cells.csv"; }
  std::string snr_csv(bool after) const {
    return eval_dir() + (after ? "/snr_after.csv" : "/snr_before.csv");
  }

  std::string report_dir() const { return root + "/report"; }
  std::string report_md() const { return report_dir() + "/report.md"; }
  std::string table1_csv() const { return report_dir() + "/table1.csv"; }
  std::string table2_csv() const { return report_dir() + "/table2.csv"; }
  std::string hist_csv(bool after) const {
    return report_dir() + (after ? "/hist_after.csv" : "/hist_before.csv");
  }
};

// Aggregated experiment outcome, rebuilt from the persisted CSV artifacts.
struct EvalReport {
  std::string config_hash;
  AttackTable attack_table;                                // models x [a..d]
  NoiseTable noise_table;                                  // noise grid, first model
  HistogramExport histograms;                              // adversarial-noise SNR shift
  std::vector<std::pair<std::string, double>> clean_cer;   // model -> [a] percent
  std::vector<std::pair<std::string, double>> recon_cer;   // model -> recon control percent
};

// Stages, in run order. Each verifies the config hash guard, skips work whose
// outputs already exist, and throws Error with a stage-tagged message.
void stage_synth_corpus(const ExperimentConfig& cfg);
void stage_compress_corpus(const ExperimentConfig& cfg);
void stage_train(const ExperimentConfig& cfg);
void stage_attack(const ExperimentConfig& cfg);
void stage_invert(const ExperimentConfig& cfg);
void stage_defend(const ExperimentConfig& cfg);
void stage_decode(const ExperimentConfig& cfg);
void stage_evaluate(const ExperimentConfig& cfg);
EvalReport stage_report(const ExperimentConfig& cfg);  // always regenerates report files

EvalReport run_experiment(const ExperimentConfig& cfg);

}  // namespace aaekit::pipeline

#endif  // AAEKIT_PIPELINE_EXPERIMENT_HPP_

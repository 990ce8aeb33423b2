// tools/aaekit_main.cc

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

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "aaekit/common/error.hpp"
#include "aaekit/pipeline/experiment.hpp"

namespace {

using aaekit::pipeline::ExperimentConfig;

struct GlobalFlags {
  std::string config_path;
  long long seed = -1;
  std::string out_dir;
  int jobs = 0;
};

ExperimentConfig resolve_config(const GlobalFlags& g) {
  ExperimentConfig cfg = g.config_path.empty() ? aaekit::pipeline::default_config()
                                               : aaekit::pipeline::load_config(g.config_path);
  if (g.seed >= 0) cfg.seed = static_cast<std::uint64_t>(g.seed);
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  if (g.jobs > 0) cfg.jobs = g.jobs;
  cfg.validate();
  return cfg;
}

void print_report(const aaekit::pipeline::EvalReport& report, const ExperimentConfig& cfg) {
  const aaekit::pipeline::Paths paths(cfg.out_dir);
  std::printf("report written to %s\n\n", paths.report_md().c_str());
  std::fputs(report.attack_table.to_markdown().c_str(), stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarial audio attack/defense experiment toolkit"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--config", g.config_path, "experiment config file (key = value lines)");
  app.add_option("--seed", g.seed, "override the config seed");
  app.add_option("--out", g.out_dir, "override the output directory");
  app.add_option("--jobs", g.jobs, "worker threads for per-utterance stages");

  // fallthrough lets the shared flags appear after the subcommand name too
  const auto sub = [&app](const char* name, const char* desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };
  auto* synth = sub("synth-corpus", "synthesize the train/test corpus");
  auto* compress = sub("compress-corpus", "codec round-trip per level");
  auto* train = sub("train", "train one model per compression level");
  auto* attack = sub("attack", "windowed FGSM on each test utterance");
  auto* invert = sub("invert", "features back to audio (adv + clean control)");
  auto* defend = sub("defend", "defense codec over the reconstructed audio");
  auto* decode = sub("decode", "decode all conditions and the noise grid");
  auto* evaluate = sub("evaluate", "aggregate decodes into CER/SNR tables");
  auto* report = sub("report", "render report.md and the CSV tables");
  auto* runall = sub("run-all", "every stage in order");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = resolve_config(g);
    if (synth->parsed()) aaekit::pipeline::stage_synth_corpus(cfg);
    if (compress->parsed()) aaekit::pipeline::stage_compress_corpus(cfg);
    if (train->parsed()) aaekit::pipeline::stage_train(cfg);
    if (attack->parsed()) aaekit::pipeline::stage_attack(cfg);
    if (invert->parsed()) aaekit::pipeline::stage_invert(cfg);
    if (defend->parsed()) aaekit::pipeline::stage_defend(cfg);
    if (decode->parsed()) aaekit::pipeline::stage_decode(cfg);
    if (evaluate->parsed()) aaekit::pipeline::stage_evaluate(cfg);
    if (report->parsed()) print_report(aaekit::pipeline::stage_report(cfg), cfg);
    if (runall->parsed()) print_report(aaekit::pipeline::run_experiment(cfg), cfg);
  } catch (const aaekit::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}

// include/aaekit/pipeline/report.hpp

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

#ifndef AAEKIT_PIPELINE_REPORT_HPP_
#define AAEKIT_PIPELINE_REPORT_HPP_

#include <string>
#include <vector>

#include "aaekit/metrics/metrics.hpp"

namespace aaekit::pipeline {

// One mean-CER measurement. `condition` is one of "a" (clean input),
// "b" (adversarial features decoded directly), "c" (reconstructed
// adversarial audio), "d" (defense-compressed reconstruction).
struct CerCell {
  std::string model;
  std::string condition;
  double cer = 0.0;  // percent
};

struct AttackTableRow {
  std::string model;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double rel_diff = 0.0;  // (d - b) / b * 100, 0 when d == b
};

struct AttackTable {
  std::vector<AttackTableRow> rows;
  double mean_b_minus_a = 0.0;
  double mean_d_minus_a = 0.0;

  std::string to_markdown() const;
  std::string to_csv() const;
};

// Requires all four conditions per model; throws MissingColumn otherwise.
AttackTable report_table1(const std::vector<CerCell>& cells);

struct NoiseCell {
  std::string kind;
  double snr_db = 0.0;
  bool compressed = false;
  double cer = 0.0;  // percent
};

struct NoiseTableRow {
  std::string kind;
  std::vector<double> plain;       // indexed like NoiseTable::snrs_db
  std::vector<double> compressed;
  std::vector<bool> worsens;       // compressed strictly above plain
};

struct NoiseTable {
  std::vector<double> snrs_db;  // descending
  std::vector<NoiseTableRow> rows;

  int flagged_cells() const;
  int total_cells() const;
  std::string to_markdown() const;
  std::string to_csv() const;
};

// Requires a plain and a compressed cell for every (kind, snr) pair;
// throws IncompleteGrid otherwise.
NoiseTable report_noise_table(const std::vector<NoiseCell>& cells);

struct HistogramExport {
  double lo = 0.0;  // shared bin range across both sample sets
  double hi = 0.0;
  std::vector<double> before_props;
  std::vector<double> after_props;
  metrics::KsResult raw;     // KS on the raw SNR samples
  metrics::KsResult binned;  // KS on the bin-proportion vectors
};

// Writes one `bin_lo,bin_hi,proportion` CSV per sample set over a bin range
// covering the union of both sets, and runs the two-sample KS test both ways.
HistogramExport export_histograms(const std::vector<metrics::SnrSample>& before,
                                  const std::vector<metrics::SnrSample>& after,
                                  int n_bins,
                                  const std::string& before_csv_path,
                                  const std::string& after_csv_path);

}  // namespace aaekit::pipeline

#endif  // AAEKIT_PIPELINE_REPORT_HPP_

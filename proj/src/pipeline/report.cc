// src/pipeline/report.cc

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

#include "aaekit/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "aaekit/common/error.hpp"

namespace aaekit::pipeline {

namespace {

std::string num(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

AttackTable report_table1(const std::vector<CerCell>& cells) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, double>> grid;
  for (const CerCell& c : cells) {
    require(std::isfinite(c.cer) && c.cer >= 0.0, ErrorCode::kInvalidArgument,
            "CER cell out of range for model " + c.model);
    require(c.condition == "a" || c.condition == "b" || c.condition == "c" || c.condition == "d",
            ErrorCode::kInvalidArgument, "unknown condition label: " + c.condition);
    if (grid.find(c.model) == grid.end()) order.push_back(c.model);
    auto& row = grid[c.model];
    require(row.find(c.condition) == row.end(), ErrorCode::kInvalidArgument,
            "duplicate cell " + c.model + "/" + c.condition);
    row[c.condition] = c.cer;
  }
  require(!order.empty(), ErrorCode::kEmptyInput, "no CER cells");

  AttackTable table;
  double sum_ba = 0.0, sum_da = 0.0;
  for (const std::string& model : order) {
    const auto& row = grid[model];
    for (const char* cond : {"a", "b", "c", "d"}) {
      require(row.count(cond) == 1, ErrorCode::kMissingColumn,
              "model " + model + " is missing condition [" + cond + "]");
    }
    AttackTableRow r;
    r.model = model;
    r.a = row.at("a");
    r.b = row.at("b");
    r.c = row.at("c");
    r.d = row.at("d");
    r.rel_diff = (r.d == r.b) ? 0.0 : (r.d - r.b) / r.b * 100.0;
    sum_ba += r.b - r.a;
    sum_da += r.d - r.a;
    table.rows.push_back(r);
  }
  table.mean_b_minus_a = sum_ba / static_cast<double>(order.size());
  table.mean_d_minus_a = sum_da / static_cast<double>(order.size());
  return table;
}

std::string AttackTable::to_markdown() const {
  std::string out;
  out += "| model | [a] clean | [b] adv features | [c] reconstructed | [d] defended | rel diff % |\n";
  out += "|---|---|---|---|---|---|\n";
  for (const AttackTableRow& r : rows) {
    out += "| " + r.model + " | " + num(r.a, "%.2f") + " | " + num(r.b, "%.2f") + " | " +
           num(r.c, "%.2f") + " | " + num(r.d, "%.2f") + " | " + num(r.rel_diff, "%+.2f") +
           " |\n";
  }
  out += "\n";
  out += "mean CER shift [b]-[a]: " + num(mean_b_minus_a, "%+.2f") + "\n";
  out += "mean CER shift [d]-[a]: " + num(mean_d_minus_a, "%+.2f") + "\n";
  return out;
}

std::string AttackTable::to_csv() const {
  std::string out = "model,a,b,c,d,rel_diff\n";
  for (const AttackTableRow& r : rows) {
    out += r.model + "," + num(r.a, "%.6f") + "," + num(r.b, "%.6f") + "," + num(r.c, "%.6f") +
           "," + num(r.d, "%.6f") + "," + num(r.rel_diff, "%.6f") + "\n";
  }
  out += "mean_b_minus_a," + num(mean_b_minus_a, "%.6f") + ",,,,\n";
  out += "mean_d_minus_a," + num(mean_d_minus_a, "%.6f") + ",,,,\n";
  return out;
}

NoiseTable report_noise_table(const std::vector<NoiseCell>& cells) {
  std::vector<std::string> kinds;
  std::vector<double> snrs;
  for (const NoiseCell& c : cells) {
    require(std::isfinite(c.cer) && c.cer >= 0.0, ErrorCode::kInvalidArgument,
            "CER cell out of range for noise " + c.kind);
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) kinds.push_back(c.kind);
    if (std::find(snrs.begin(), snrs.end(), c.snr_db) == snrs.end()) snrs.push_back(c.snr_db);
  }
  require(!kinds.empty(), ErrorCode::kEmptyInput, "no noise cells");
  std::sort(snrs.begin(), snrs.end(), std::greater<double>());

  NoiseTable table;
  table.snrs_db = snrs;
  const double unset = -1.0;
  for (const std::string& kind : kinds) {
    NoiseTableRow row;
    row.kind = kind;
    row.plain.assign(snrs.size(), unset);
    row.compressed.assign(snrs.size(), unset);
    for (const NoiseCell& c : cells) {
      if (c.kind != kind) continue;
      auto it = std::find(snrs.begin(), snrs.end(), c.snr_db);
      auto idx = static_cast<std::size_t>(it - snrs.begin());
      (c.compressed ? row.compressed : row.plain)[idx] = c.cer;
    }
    for (std::size_t i = 0; i < snrs.size(); ++i) {
      require(row.plain[i] != unset && row.compressed[i] != unset, ErrorCode::kIncompleteGrid,
              "noise grid cell missing: " + kind + " at " + num(snrs[i], "%g") + " dB");
      row.worsens.push_back(row.compressed[i] > row.plain[i]);
    }
    table.rows.push_back(row);
  }
  return table;
}

int NoiseTable::flagged_cells() const {
  int n = 0;
  for (const NoiseTableRow& r : rows)
    for (bool w : r.worsens) n += w ? 1 : 0;
  return n;
}

int NoiseTable::total_cells() const {
  return static_cast<int>(rows.size() * snrs_db.size());
}

std::string NoiseTable::to_markdown() const {
  std::string out = "| noise | input |";
  for (double s : snrs_db) out += " " + num(s, "%g") + " dB |";
  out += "\n|---|---|";
  for (std::size_t i = 0; i < snrs_db.size(); ++i) out += "---|";
  out += "\n";
  for (const NoiseTableRow& r : rows) {
    out += "| " + r.kind + " | plain |";
    for (double v : r.plain) out += " " + num(v, "%.2f") + " |";
    out += "\n| " + r.kind + " | compressed |";
    for (std::size_t i = 0; i < r.compressed.size(); ++i) {
      out += " " + num(r.compressed[i], "%.2f") + (r.worsens[i] ? " *" : "") + " |";
    }
    out += "\n";
  }
  out += "\n* compressed input decodes worse than plain (" +
         std::to_string(flagged_cells()) + "/" + std::to_string(total_cells()) + " cells)\n";
  return out;
}

std::string NoiseTable::to_csv() const {
  std::string out = "kind,snr_db,plain,compressed,worsens\n";
  for (const NoiseTableRow& r : rows) {
    for (std::size_t i = 0; i < snrs_db.size(); ++i) {
      out += r.kind + "," + num(snrs_db[i], "%g") + "," + num(r.plain[i], "%.6f") + "," +
             num(r.compressed[i], "%.6f") + "," + (r.worsens[i] ? "1" : "0") + "\n";
    }
  }
  return out;
}

HistogramExport export_histograms(const std::vector<metrics::SnrSample>& before,
                                  const std::vector<metrics::SnrSample>& after,
                                  int n_bins,
                                  const std::string& before_csv_path,
                                  const std::string& after_csv_path) {
  require(!before.empty() && !after.empty(), ErrorCode::kEmptyInput,
          "histogram export needs samples on both sides");
  require(n_bins >= 1, ErrorCode::kInvalidArgument, "n_bins must be >= 1");

  std::vector<double> va, vb;
  va.reserve(before.size());
  vb.reserve(after.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const metrics::SnrSample& s : before) {
    va.push_back(s.snr_db);
    lo = std::min(lo, s.snr_db);
    hi = std::max(hi, s.snr_db);
  }
  for (const metrics::SnrSample& s : after) {
    vb.push_back(s.snr_db);
    lo = std::min(lo, s.snr_db);
    hi = std::max(hi, s.snr_db);
  }
  if (lo == hi) {  // degenerate spread still needs a non-empty range
    lo -= 0.5;
    hi += 0.5;
  }

  HistogramExport ex;
  ex.lo = lo;
  ex.hi = hi;
  metrics::HistogramSpec spec;
  spec.n_bins = n_bins;
  spec.lo = lo;
  spec.hi = hi;
  ex.before_props = metrics::normalized_histogram(va, spec);
  ex.after_props = metrics::normalized_histogram(vb, spec);
  ex.raw = metrics::ks_two_sample(va, vb);
  ex.binned = metrics::ks_from_bin_counts(ex.before_props, ex.after_props, spec);

  const double width = (hi - lo) / n_bins;
  auto dump = [&](const std::string& path, const std::vector<double>& props) {
    std::ofstream os(path, std::ios::binary);
    require(os.is_open(), ErrorCode::kIoError, "cannot write " + path);
    os << "bin_lo,bin_hi,proportion\n";
    for (int i = 0; i < n_bins; ++i) {
      os << num(lo + i * width, "%.10g") << "," << num(lo + (i + 1) * width, "%.10g") << ","
         << num(props[static_cast<std::size_t>(i)], "%.10g") << "\n";
    }
    require(os.good(), ErrorCode::kIoError, "short write to " + path);
  };
  dump(before_csv_path, ex.before_props);
  dump(after_csv_path, ex.after_props);
  return ex;
}

}  // namespace aaekit::pipeline

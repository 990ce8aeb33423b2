// src/metrics/metrics.cc

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

#include "aaekit/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aaekit/common/error.hpp"

namespace aaekit::metrics {

std::size_t levenshtein(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double cer(const std::string& reference, const std::string& hypothesis) {
  require(!reference.empty(), ErrorCode::kEmptyReference, "reference transcript is empty");
  return static_cast<double>(levenshtein(reference, hypothesis)) /
         static_cast<double>(reference.size());
}

double snr_adv(const audio::Waveform& ref_speech, const audio::Waveform& adv_audio) {
  require(ref_speech.sample_rate_hz == adv_audio.sample_rate_hz, ErrorCode::kRateMismatch,
          "sample rates differ");
  require(ref_speech.size() == adv_audio.size(), ErrorCode::kLengthMismatch,
          "waveform lengths differ");
  double p_ref = 0.0, p_noise = 0.0;
  for (std::size_t i = 0; i < ref_speech.size(); ++i) {
    double r = ref_speech.samples[i];
    double d = adv_audio.samples[i] - r;
    p_ref += r * r;
    p_noise += d * d;
  }
  if (p_noise <= 0.0) return kSnrCapDb;
  if (p_ref <= 0.0) return -kSnrCapDb;
  return std::clamp(10.0 * std::log10(p_ref / p_noise), -kSnrCapDb, kSnrCapDb);
}

std::vector<double> normalized_histogram(const std::vector<double>& values,
                                         const HistogramSpec& spec) {
  require(!values.empty(), ErrorCode::kEmptyInput, "no values to bin");
  require(spec.n_bins >= 1, ErrorCode::kInvalidArgument, "n_bins must be >= 1");
  require(spec.lo < spec.hi, ErrorCode::kInvalidArgument, "histogram range must have lo < hi");

  std::vector<double> bins(spec.n_bins, 0.0);
  const double width = (spec.hi - spec.lo) / spec.n_bins;
  for (double v : values) {
    int idx = static_cast<int>(std::floor((v - spec.lo) / width));
    idx = std::clamp(idx, 0, spec.n_bins - 1);
    bins[static_cast<std::size_t>(idx)] += 1.0;
  }
  const double total = static_cast<double>(values.size());
  for (double& b : bins) b /= total;
  return bins;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form converges fast for small arguments.
    double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
    double s = t + std::pow(t, 9.0) + std::pow(t, 25.0) + std::pow(t, 49.0);
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / lambda * s, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() >= 5 && b.size() >= 5, ErrorCode::kTooFewSamples,
          "each sample needs at least 5 values");
  KsResult r;
  r.statistic = ks_statistic(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n_eff = na * nb / (na + nb);
  r.p_value = kolmogorov_q(std::sqrt(n_eff) * r.statistic);
  return r;
}

KsResult ks_from_bin_counts(const std::vector<double>& a, const std::vector<double>& b,
                            const HistogramSpec& spec) {
  return ks_two_sample(normalized_histogram(a, spec), normalized_histogram(b, spec));
}

}  // namespace aaekit::metrics

// include/aaekit/metrics/metrics.hpp

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

#ifndef AAEKIT_METRICS_METRICS_HPP_
#define AAEKIT_METRICS_METRICS_HPP_

#include <string>
#include <vector>

#include "aaekit/audio/wave.hpp"

namespace aaekit::metrics {

inline constexpr double kSnrCapDb = 120.0;

struct SnrSample {
  std::string utt_id;
  double snr_db = 0.0;
};

struct HistogramSpec {
  int n_bins = 50;
  double lo = 0.0;
  double hi = 1.0;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Character error rate: unit-cost Levenshtein distance over characters,
// divided by the reference length. Exact-character comparison, no case
// folding. Can exceed 1 when the hypothesis is much longer than the
// reference.
double cer(const std::string& reference, const std::string& hypothesis);

std::size_t levenshtein(const std::string& a, const std::string& b);

// 10*log10(P_ref / P_(adv - ref)), capped to +-120 dB so that identical
// signals (zero residual) stay finite.
double snr_adv(const audio::Waveform& ref_speech, const audio::Waveform& adv_audio);

// Bin proportions summing to 1. Values outside [lo, hi] count toward the
// nearest edge bin.
std::vector<double> normalized_histogram(const std::vector<double>& values,
                                         const HistogramSpec& spec);

// Two-sided two-sample KS test on raw samples. p-value from the asymptotic
// Kolmogorov distribution evaluated at sqrt(n_a*n_b/(n_a+n_b)) * D.
KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

// Variant operating on the two histograms' bin proportions instead of the raw
// samples: both inputs are binned with `spec`, then the two proportion
// vectors are compared as if they were samples.
KsResult ks_from_bin_counts(const std::vector<double>& a, const std::vector<double>& b,
                            const HistogramSpec& spec);

// Survival function of the Kolmogorov distribution, Q(lambda).
double kolmogorov_q(double lambda);

}  // namespace aaekit::metrics

#endif  // AAEKIT_METRICS_METRICS_HPP_

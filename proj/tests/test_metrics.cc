// tests/test_metrics.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aaekit/common/error.hpp"
#include "aaekit/common/rng.hpp"
#include "aaekit/metrics/metrics.hpp"

using namespace aaekit;

namespace {

// Plain quadratic edit-distance table, kept deliberately separate from the
// two-row implementation under test.
std::size_t edit_distance_oracle(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[n][m];
}

std::string random_string(Rng& rng, int max_len, int alphabet) {
  const int len = static_cast<int>(rng.uniform_int(0, max_len));
  std::string s;
  for (int i = 0; i < len; ++i) {
    s += static_cast<char>('a' + rng.uniform_int(0, alphabet - 1));
  }
  return s;
}

audio::Waveform wave_of(std::vector<double> samples) {
  audio::Waveform w;
  w.samples = std::move(samples);
  return w;
}

}  // namespace

TEST_CASE("cer basics") {
  CHECK(metrics::cer("abc", "abc") == 0.0);
  CHECK(metrics::cer("abc", "") == doctest::Approx(1.0));
  CHECK(metrics::cer("kitten", "sitting") == doctest::Approx(3.0 / 6.0));
  CHECK(metrics::cer("ab", "bbbb") > 1.0);  // CER may exceed 1 on long hypotheses
  try {
    metrics::cer("", "abc");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyReference);
  }
}

TEST_CASE("cer matches the DP oracle on 500 random pairs") {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const std::string ref = "x" + random_string(rng, 11, 4);  // non-empty reference
    const std::string hyp = random_string(rng, 12, 4);
    const double expected =
        static_cast<double>(edit_distance_oracle(ref, hyp)) / static_cast<double>(ref.size());
    CHECK(metrics::cer(ref, hyp) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(metrics::levenshtein(ref, hyp) == edit_distance_oracle(ref, hyp));
  }
}

TEST_CASE("snr_adv formula, caps and errors") {
  const audio::Waveform ref = wave_of({1.0, -1.0, 1.0, -1.0});

  CHECK(metrics::snr_adv(ref, ref) == doctest::Approx(120.0));

  audio::Waveform adv = ref;
  for (double& s : adv.samples) s += 1.0;  // noise power == signal power
  CHECK(metrics::snr_adv(ref, adv) == doctest::Approx(0.0).epsilon(1e-12));

  audio::Waveform adv10 = ref;
  const double g = std::sqrt(1.0 / 10.0);
  for (std::size_t i = 0; i < adv10.samples.size(); ++i) {
    adv10.samples[i] += (i % 2 == 0 ? g : -g);  // P_noise = P_ref/10
  }
  CHECK(metrics::snr_adv(ref, adv10) == doctest::Approx(10.0).epsilon(1e-9));

  const audio::Waveform zero = wave_of({0.0, 0.0, 0.0, 0.0});
  CHECK(metrics::snr_adv(zero, ref) == doctest::Approx(-120.0));

  audio::Waveform shorter = wave_of({1.0, 2.0});
  CHECK_THROWS_AS(metrics::snr_adv(ref, shorter), Error);

  audio::Waveform other_rate = ref;
  other_rate.sample_rate_hz = 8000;
  CHECK_THROWS_AS(metrics::snr_adv(ref, other_rate), Error);
}

TEST_CASE("snr_adv strictly decreases as noise grows") {
  Rng rng(7);
  audio::Waveform ref;
  for (int i = 0; i < 1000; ++i) ref.samples.push_back(rng.gaussian());
  std::vector<double> noise;
  for (int i = 0; i < 1000; ++i) noise.push_back(rng.gaussian());

  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 10; ++k) {
    audio::Waveform adv = ref;
    for (std::size_t i = 0; i < adv.samples.size(); ++i) adv.samples[i] += 0.05 * k * noise[i];
    const double snr = metrics::snr_adv(ref, adv);
    CHECK(snr < prev);
    prev = snr;
  }
}

TEST_CASE("normalized_histogram proportions and edge handling") {
  metrics::HistogramSpec spec;
  spec.n_bins = 50;
  spec.lo = 0.0;
  spec.hi = 1.0;

  const auto single = metrics::normalized_histogram({0.31}, spec);
  REQUIRE(single.size() == 50);
  CHECK(std::count(single.begin(), single.end(), 0.0) == 49);
  CHECK(single[15] == doctest::Approx(1.0));  // floor(0.31 * 50)

  Rng rng(12);
  std::vector<double> values;
  for (int i = 0; i < 777; ++i) values.push_back(rng.uniform(-0.5, 1.5));  // includes outliers
  const auto props = metrics::normalized_histogram(values, spec);
  double sum = 0.0;
  for (double p : props) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  // out-of-range values land in the edge bins
  const auto low = metrics::normalized_histogram({-3.0}, spec);
  CHECK(low.front() == doctest::Approx(1.0));
  const auto high = metrics::normalized_histogram({42.0}, spec);
  CHECK(high.back() == doctest::Approx(1.0));

  // uniform grid over the range spreads evenly
  std::vector<double> grid;
  for (int i = 0; i < 5000; ++i) grid.push_back((i + 0.5) / 5000.0);
  const auto even = metrics::normalized_histogram(grid, spec);
  for (double p : even) CHECK(p == doctest::Approx(1.0 / 50).epsilon(1.0 / 5000 * 50));

  CHECK_THROWS_AS(metrics::normalized_histogram({}, spec), Error);
}

TEST_CASE("ks statistic on trivial configurations") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const auto same = metrics::ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-9));

  const std::vector<double> b = {14, 15, 16, 17, 18};
  const auto disjoint = metrics::ks_two_sample(a, b);
  CHECK(disjoint.statistic == doctest::Approx(1.0));

  CHECK_THROWS_AS(metrics::ks_two_sample({1, 2, 3}, a), Error);
}

TEST_CASE("ks is symmetric in its arguments") {
  Rng rng(31);
  std::vector<double> a, b;
  for (int i = 0; i < 120; ++i) a.push_back(rng.gaussian());
  for (int i = 0; i < 85; ++i) b.push_back(rng.gaussian() * 1.4 + 0.2);
  const auto ab = metrics::ks_two_sample(a, b);
  const auto ba = metrics::ks_two_sample(b, a);
  CHECK(ab.statistic == ba.statistic);
  CHECK(ab.p_value == ba.p_value);
}

TEST_CASE("ks simulation oracle: shifted vs identical distributions") {
  std::vector<double> shifted_ps, same_ps;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 100);
    std::vector<double> a, b, c;
    for (int i = 0; i < 200; ++i) a.push_back(rng.gaussian());
    for (int i = 0; i < 200; ++i) b.push_back(rng.gaussian() + 1.0);  // one sigma apart
    for (int i = 0; i < 200; ++i) c.push_back(rng.gaussian());
    shifted_ps.push_back(metrics::ks_two_sample(a, b).p_value);
    same_ps.push_back(metrics::ks_two_sample(a, c).p_value);
  }
  std::sort(shifted_ps.begin(), shifted_ps.end());
  std::sort(same_ps.begin(), same_ps.end());
  CHECK(shifted_ps[shifted_ps.size() / 2] < 0.01);
  CHECK(same_ps[same_ps.size() / 2] > 0.1);
}

TEST_CASE("ks asymptotic tail matches reference values") {
  // Q(lambda) reference points from the series definition, computed
  // independently: Q(0.5) ~ 0.9639452436, Q(1.0) ~ 0.2699996717,
  // Q(2.0) ~ 0.00067092.
  CHECK(metrics::kolmogorov_q(0.5) == doctest::Approx(0.9639452436).epsilon(1e-6));
  CHECK(metrics::kolmogorov_q(1.0) == doctest::Approx(0.2699996717).epsilon(1e-6));
  CHECK(metrics::kolmogorov_q(2.0) == doctest::Approx(0.00067092).epsilon(1e-4));
  CHECK(metrics::kolmogorov_q(0.0) == doctest::Approx(1.0));
}

TEST_CASE("bin-count ks mode works on proportion vectors") {
  metrics::HistogramSpec spec;
  spec.n_bins = 50;
  spec.lo = -5.0;
  spec.hi = 5.0;
  Rng rng(77);
  std::vector<double> a, b;
  for (int i = 0; i < 400; ++i) a.push_back(rng.gaussian());
  for (int i = 0; i < 400; ++i) b.push_back(rng.gaussian() + 2.0);
  const auto pa = metrics::normalized_histogram(a, spec);
  const auto pb = metrics::normalized_histogram(b, spec);

  const auto near = metrics::ks_from_bin_counts(pa, pa, spec);
  CHECK(near.statistic == doctest::Approx(0.0));
  const auto far = metrics::ks_from_bin_counts(pa, pb, spec);
  CHECK(far.statistic > 0.5);
  CHECK(far.p_value < near.p_value);
}

// src/codec/codec.cc

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

#include "aaekit/codec/codec.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <thread>

#include "aaekit/common/error.hpp"
#include "aaekit/feat/fft.hpp"

namespace aaekit::codec {

namespace {

// Energy floor standing in for the absolute threshold of hearing, relative
// to full-scale MDCT coefficients.
constexpr double kAthEnergy = 1e-7;
constexpr double kMaskOffsetDb = 16.0;
constexpr double kMaskSlopeDbPerBark = 25.0;
constexpr int kMaxAlignLag = 4096;

}  // namespace

void CodecSpec::validate() const {
  require(frame_len >= 4 && frame_len % 4 == 0, ErrorCode::kInvalidConfig,
          "frame_len must be a positive multiple of 4");
  require(keep_coeffs >= 1 && keep_coeffs <= frame_len / 2, ErrorCode::kInvalidConfig,
          "keep_coeffs outside [1, frame_len/2]");
  require(quant_levels >= 2, ErrorCode::kInvalidConfig, "quant_levels must be >= 2");
  require(bitrate_kbps >= 1, ErrorCode::kInvalidConfig, "bitrate must be positive");
  require(bandwidth_hz >= 0.0, ErrorCode::kInvalidConfig, "bandwidth_hz must be >= 0");
  require(std::isfinite(cull_boost_db), ErrorCode::kInvalidConfig,
          "cull_boost_db must be finite");
  require(ath_db < 0.0, ErrorCode::kInvalidConfig, "ath_db must be negative");
  if (kind == CodecKind::kExternalCommand) {
    for (const std::string* t : {&encode_template, &decode_template}) {
      require(t->find("{in}") != std::string::npos && t->find("{out}") != std::string::npos,
              ErrorCode::kInvalidConfig, "command template must contain {in} and {out}");
    }
  }
}

CodecSpec builtin_preset(const std::string& name) {
  CodecSpec s;
  s.kind = CodecKind::kBuiltinPerceptual;
  s.name = name;
  if (name == "hi") {
    s.bitrate_kbps = 128;
    s.keep_coeffs = 220;
    s.quant_levels = 8192;
    s.cull_boost_db = 0.0;
    s.ath_db = -40.0;
  } else if (name == "mid") {
    s.bitrate_kbps = 64;
    s.keep_coeffs = 160;
    s.quant_levels = 4096;
    s.cull_boost_db = 8.0;
    s.ath_db = -30.0;
  } else if (name == "lo") {
    s.bitrate_kbps = 24;
    s.keep_coeffs = 128;
    s.quant_levels = 2048;
    s.cull_boost_db = 12.0;
    s.ath_db = -26.0;
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown builtin preset: " + name);
  }
  return s;
}

double bark_scale(double f_hz) {
  return 13.0 * std::atan(0.00076 * f_hz) + 3.5 * std::atan((f_hz / 7500.0) * (f_hz / 7500.0));
}

std::vector<int> bark_band_map(int n_coeffs, int sample_rate_hz) {
  std::vector<int> band(static_cast<std::size_t>(n_coeffs));
  const double bin_hz = (sample_rate_hz / 2.0) / n_coeffs;
  for (int k = 0; k < n_coeffs; ++k) {
    double f = (k + 0.5) * bin_hz;
    band[static_cast<std::size_t>(k)] = static_cast<int>(std::lround(bark_scale(f)));
  }
  return band;
}

Eigen::VectorXd mask_threshold(const Eigen::VectorXd& coeff_magnitudes, int sample_rate_hz) {
  const int n = static_cast<int>(coeff_magnitudes.size());
  require(n >= 1, ErrorCode::kInvalidArgument, "empty spectrum");
  require(coeff_magnitudes.minCoeff() >= 0.0, ErrorCode::kInvalidArgument,
          "magnitudes must be nonnegative");
  const std::vector<int> band = bark_band_map(n, sample_rate_hz);
  const int n_bands = *std::max_element(band.begin(), band.end()) + 1;

  Eigen::VectorXd energy = Eigen::VectorXd::Zero(n_bands);
  for (int k = 0; k < n; ++k) {
    energy(band[static_cast<std::size_t>(k)]) += coeff_magnitudes(k) * coeff_magnitudes(k);
  }

  Eigen::VectorXd thr = Eigen::VectorXd::Constant(n_bands, kAthEnergy);
  for (int b = 0; b < n_bands; ++b) {
    for (int m = 0; m < n_bands; ++m) {
      if (energy(m) <= 0.0) continue;
      double atten_db = kMaskOffsetDb + kMaskSlopeDbPerBark * std::abs(b - m);
      thr(b) = std::max(thr(b), energy(m) * std::pow(10.0, -atten_db / 10.0));
    }
  }
  return thr;
}

namespace {

struct MdctBasis {
  // rows: N/2 coefficients, cols: N samples
  Eigen::MatrixXd cos_table;
  Eigen::VectorXd window;
};

MdctBasis make_basis(int n) {
  MdctBasis b;
  const int half = n / 2;
  b.cos_table.resize(half, n);
  b.window.resize(n);
  for (int i = 0; i < n; ++i) {
    b.window(i) = std::sin(M_PI * (i + 0.5) / n);
  }
  for (int k = 0; k < half; ++k) {
    for (int i = 0; i < n; ++i) {
      b.cos_table(k, i) = std::cos(M_PI / half * (i + 0.5 + half / 2.0) * (k + 0.5));
    }
  }
  return b;
}

}  // namespace

namespace {

audio::Waveform builtin_roundtrip(const audio::Waveform& w, const CodecSpec& spec) {
  const int n = spec.frame_len;
  const int half = n / 2;
  const MdctBasis basis = make_basis(n);
  const std::vector<int> band = bark_band_map(half, w.sample_rate_hz);

  // Half-frame zero padding on both sides for time-domain alias cancellation.
  const std::size_t in_len = w.size();
  const std::size_t n_frames = in_len / half + 2;
  const std::size_t padded = (n_frames + 1) * half;
  std::vector<double> x(padded, 0.0);
  std::copy(w.samples.begin(), w.samples.end(), x.begin() + half);
  std::vector<double> y(padded, 0.0);

  // Analysis pass; the hearing-floor proxy references the loudest coefficient
  // anywhere in the take, standing in for a fixed playback gain.
  Eigen::MatrixXd all(half, static_cast<Eigen::Index>(n_frames));
  Eigen::VectorXd frame(n);
  for (std::size_t fr = 0; fr < n_frames; ++fr) {
    const double* src = x.data() + fr * half;
    for (int i = 0; i < n; ++i) frame(i) = src[i] * basis.window(i);
    all.col(static_cast<Eigen::Index>(fr)).noalias() = basis.cos_table * frame;
  }
  const double peak_energy = all.cwiseAbs2().maxCoeff();
  const double ath_floor = peak_energy * std::pow(10.0, spec.ath_db / 10.0);
  const double cull_gain = std::pow(10.0, spec.cull_boost_db / 10.0);
  const double bin_hz = (w.sample_rate_hz / 2.0) / half;

  Eigen::VectorXd coeffs(half);
  std::vector<int> keep_idx(static_cast<std::size_t>(half));
  for (std::size_t fr = 0; fr < n_frames; ++fr) {
    coeffs = all.col(static_cast<Eigen::Index>(fr));

    if (spec.bandwidth_hz > 0.0) {
      for (int k = 0; k < half; ++k) {
        if ((k + 0.5) * bin_hz > spec.bandwidth_hz) coeffs(k) = 0.0;
      }
    }

    for (int k = 0; k < half; ++k) {
      if (coeffs(k) * coeffs(k) < ath_floor) coeffs(k) = 0.0;
    }

    // Zero everything below the per-coefficient share of the band threshold.
    Eigen::VectorXd thr = mask_threshold(coeffs.cwiseAbs(), w.sample_rate_hz);
    Eigen::VectorXd band_count = Eigen::VectorXd::Zero(thr.size());
    for (int k = 0; k < half; ++k) band_count(band[static_cast<std::size_t>(k)]) += 1.0;
    for (int k = 0; k < half; ++k) {
      double per_coeff = cull_gain * thr(band[static_cast<std::size_t>(k)]) /
                         std::max(1.0, band_count(band[static_cast<std::size_t>(k)]));
      if (coeffs(k) * coeffs(k) < per_coeff) coeffs(k) = 0.0;
    }

    // Keep the largest `keep_coeffs` survivors (ties resolved by index).
    std::iota(keep_idx.begin(), keep_idx.end(), 0);
    std::nth_element(keep_idx.begin(), keep_idx.begin() + (spec.keep_coeffs - 1), keep_idx.end(),
                     [&](int a, int c) { return std::abs(coeffs(a)) > std::abs(coeffs(c)); });
    double cutoff = std::abs(coeffs(keep_idx[static_cast<std::size_t>(spec.keep_coeffs - 1)]));
    int tie_budget = spec.keep_coeffs;
    for (int k = 0; k < half; ++k) {
      if (std::abs(coeffs(k)) > cutoff) --tie_budget;
    }
    for (int k = 0; k < half; ++k) {
      double a = std::abs(coeffs(k));
      if (a == 0.0 || a < cutoff) {
        coeffs(k) = 0.0;
      } else if (a == cutoff) {
        if (tie_budget > 0) {
          --tie_budget;
        } else {
          coeffs(k) = 0.0;
        }
      }
    }

    double max_abs = coeffs.cwiseAbs().maxCoeff();
    if (max_abs > 0.0) {
      double step = max_abs / spec.quant_levels;
      for (int k = 0; k < half; ++k) {
        coeffs(k) = std::round(coeffs(k) / step) * step;
      }
    }

    frame.noalias() = basis.cos_table.transpose() * coeffs;
    double* dst = y.data() + fr * half;
    for (int i = 0; i < n; ++i) dst[i] += (2.0 / half) * basis.window(i) * frame(i);
  }

  audio::Waveform out;
  out.sample_rate_hz = w.sample_rate_hz;
  out.samples.assign(y.begin() + half, y.begin() + half + static_cast<std::ptrdiff_t>(in_len));
  return out;
}

std::string which(const std::string& prog) {
  if (prog.find('/') != std::string::npos) {
    return ::access(prog.c_str(), X_OK) == 0 ? prog : "";
  }
  const char* path_env = std::getenv("PATH");
  if (!path_env) return "";
  std::stringstream ss(path_env);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    std::string cand = dir + "/" + prog;
    if (::access(cand.c_str(), X_OK) == 0) return cand;
  }
  return "";
}

std::atomic<std::uint64_t> g_temp_counter{0};

std::filesystem::path temp_path(const std::string& suffix) {
  std::uint64_t c = g_temp_counter.fetch_add(1);
  return std::filesystem::temp_directory_path() /
         ("aaekit_" + std::to_string(::getpid()) + "_" + std::to_string(c) + suffix);
}

audio::Waveform external_roundtrip(const audio::Waveform& w, const CodecSpec& spec) {
  require(encoder_available(spec), ErrorCode::kEncoderUnavailable,
          "encoder binary not found for template: " + spec.encode_template);

  const std::filesystem::path in_wav = temp_path(".wav");
  const std::filesystem::path packed = temp_path(".bin");
  const std::filesystem::path out_wav = temp_path(".dec.wav");
  struct Cleanup {
    std::vector<std::filesystem::path> paths;
    ~Cleanup() {
      std::error_code ec;
      for (const auto& p : paths) std::filesystem::remove(p, ec);
    }
  } cleanup{{in_wav, packed, out_wav}};

  audio::write_wav(w, in_wav.string());
  CommandResult enc = run_command(
      render_template(spec.encode_template, in_wav.string(), packed.string(), spec.bitrate_kbps),
      60.0);
  require(!enc.timed_out && enc.exit_code == 0, ErrorCode::kEncoderFailed,
          "encode command failed (exit " + std::to_string(enc.exit_code) + ")");
  CommandResult dec = run_command(
      render_template(spec.decode_template, packed.string(), out_wav.string(), spec.bitrate_kbps),
      60.0);
  require(!dec.timed_out && dec.exit_code == 0, ErrorCode::kEncoderFailed,
          "decode command failed (exit " + std::to_string(dec.exit_code) + ")");

  audio::Waveform decoded = audio::read_wav(out_wav.string());
  require(decoded.sample_rate_hz == w.sample_rate_hz, ErrorCode::kRateMismatch,
          "decoder changed the sample rate");
  return align_decoded(w, decoded);
}

}  // namespace

audio::Waveform roundtrip(const audio::Waveform& w, const CodecSpec& spec) {
  spec.validate();
  require(w.size() > 0, ErrorCode::kEmptyInput, "empty waveform");
  if (spec.kind == CodecKind::kBuiltinPerceptual) return builtin_roundtrip(w, spec);
  return external_roundtrip(w, spec);
}

audio::Waveform align_decoded(const audio::Waveform& original, const audio::Waveform& decoded) {
  require(original.sample_rate_hz == decoded.sample_rate_hz, ErrorCode::kRateMismatch,
          "sample rates differ");
  require(decoded.size() * 2 >= original.size(), ErrorCode::kInvalidArgument,
          "decoded output shorter than half the original");

  std::size_t p = 1;
  while (p < std::max(original.size(), decoded.size()) + kMaxAlignLag + 1) p <<= 1;

  std::vector<double> a(p, 0.0), b(p, 0.0);
  std::copy(original.samples.begin(), original.samples.end(), a.begin());
  std::copy(decoded.samples.begin(), decoded.samples.end(), b.begin());

  feat::RealFft fft(static_cast<int>(p));
  std::vector<std::complex<double>> fa, fb;
  fft.forward(a, fa);
  fft.forward(b, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = fb[i] * std::conj(fa[i]);
  std::vector<double> corr;
  fft.inverse(fa, corr);

  const std::size_t max_lag =
      std::min<std::size_t>(kMaxAlignLag, decoded.size() > 0 ? decoded.size() - 1 : 0);
  std::size_t best_lag = 0;
  double best = corr[0];
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    if (corr[lag] > best) {
      best = corr[lag];
      best_lag = lag;
    }
  }

  double norm = std::sqrt(audio::power(original) * static_cast<double>(original.size()) *
                          audio::power(decoded) * static_cast<double>(decoded.size()));
  require(norm > 0.0 && best / norm >= 0.1, ErrorCode::kAlignmentFailed,
          "correlation peak below threshold");

  audio::Waveform out;
  out.sample_rate_hz = original.sample_rate_hz;
  out.samples.assign(original.size(), 0.0);
  for (std::size_t i = 0; i < original.size(); ++i) {
    std::size_t j = i + best_lag;
    if (j < decoded.size()) out.samples[i] = decoded.samples[j];
  }
  return out;
}

bool encoder_available(const CodecSpec& spec) {
  if (spec.kind == CodecKind::kBuiltinPerceptual) return true;
  std::istringstream ss(spec.encode_template);
  std::string prog;
  ss >> prog;
  return !prog.empty() && !which(prog).empty();
}

std::vector<std::string> render_template(const std::string& tmpl, const std::string& in_path,
                                         const std::string& out_path, int bitrate_kbps) {
  std::istringstream ss(tmpl);
  std::vector<std::string> argv;
  std::string word;
  while (ss >> word) {
    auto replace_all = [&](const std::string& key, const std::string& val) {
      std::size_t pos;
      while ((pos = word.find(key)) != std::string::npos) word.replace(pos, key.size(), val);
    };
    replace_all("{in}", in_path);
    replace_all("{out}", out_path);
    replace_all("{bitrate}", std::to_string(bitrate_kbps));
    argv.push_back(word);
  }
  require(!argv.empty(), ErrorCode::kInvalidConfig, "empty command template");
  return argv;
}

CommandResult run_command(const std::vector<std::string>& argv, double timeout_s) {
  require(!argv.empty(), ErrorCode::kInvalidArgument, "empty argv");
  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const std::string& s : argv) cargv.push_back(const_cast<char*>(s.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = ::fork();
  require(pid >= 0, ErrorCode::kIoError, "fork failed");
  if (pid == 0) {
    int devnull = ::open("/dev/null", O_RDWR);
    if (devnull >= 0) {
      ::dup2(devnull, STDOUT_FILENO);
      ::dup2(devnull, STDERR_FILENO);
      ::dup2(devnull, STDIN_FILENO);
    }
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }

  CommandResult res;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  for (;;) {
    pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      res.timed_out = true;
      return res;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace aaekit::codec

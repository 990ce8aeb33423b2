// include/aaekit/feat/fft.hpp

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

#ifndef AAEKIT_FEAT_FFT_HPP_
#define AAEKIT_FEAT_FFT_HPP_

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace aaekit::feat {

/// Real FFT of a fixed size. Forward returns the one-sided spectrum
/// (n/2+1 bins, unnormalized); inverse expects the one-sided spectrum and
/// returns n real samples. Not thread-safe: use one instance per thread.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) { fft_.SetFlag(Eigen::FFT<double>::HalfSpectrum); }

  int size() const { return n_; }

  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    fft_.fwd(out, in);
  }

  void inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out) {
    out.resize(n_);
    fft_.inv(out, in);
  }

 private:
  int n_;
  Eigen::FFT<double> fft_;
};

}  // namespace aaekit::feat

#endif  // AAEKIT_FEAT_FFT_HPP_

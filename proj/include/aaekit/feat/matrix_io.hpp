// include/aaekit/feat/matrix_io.hpp

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

#ifndef AAEKIT_FEAT_MATRIX_IO_HPP_
#define AAEKIT_FEAT_MATRIX_IO_HPP_

#include <Eigen/Dense>
#include <string>

namespace aaekit::feat {

// Flat matrix container: two little-endian uint32 (rows, cols) followed by
// rows*cols row-major float32 values. Values round-trip through float32.
void write_fmat(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_fmat(const std::string& path);

}  // namespace aaekit::feat

#endif  // AAEKIT_FEAT_MATRIX_IO_HPP_

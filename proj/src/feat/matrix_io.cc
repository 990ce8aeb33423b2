// src/feat/matrix_io.cc

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

#include "aaekit/feat/matrix_io.hpp"

#include <cstdint>
#include <fstream>
#include <vector>

#include "aaekit/common/error.hpp"

namespace aaekit::feat {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  require(static_cast<bool>(is), ErrorCode::kIoError, "truncated matrix header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_fmat(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream os(path, std::ios::binary);
  require(os.is_open(), ErrorCode::kIoError, "cannot open for writing: " + path);
  put_u32(os, static_cast<std::uint32_t>(m.rows()));
  put_u32(os, static_cast<std::uint32_t>(m.cols()));
  std::vector<float> row(m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = static_cast<float>(m(r, c));
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  require(static_cast<bool>(os), ErrorCode::kIoError, "short write: " + path);
}

Eigen::MatrixXd read_fmat(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.is_open(), ErrorCode::kNotFound, "cannot open: " + path);
  std::uint32_t rows = get_u32(is);
  std::uint32_t cols = get_u32(is);
  Eigen::MatrixXd m(rows, cols);
  std::vector<float> row(cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    require(static_cast<bool>(is), ErrorCode::kIoError, "truncated matrix body: " + path);
    for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

}  // namespace aaekit::feat

/* Copyright 2026 The augpipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "feats/feature_matrix.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "common/binary_io.h"
#include "common/error.h"

namespace augpipe {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols,
                             std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw_input("feature matrix data size does not match shape");
  }
}

FeatureMatrix FeatureMatrix::slice_rows(std::size_t begin,
                                        std::size_t end) const {
  if (begin > end || end > rows_) {
    throw_input("row slice [" + std::to_string(begin) + ", " +
                std::to_string(end) + ") out of range for " +
                std::to_string(rows_) + " frames");
  }
  FeatureMatrix out;
  out.rows_ = end - begin;
  out.cols_ = cols_;
  out.frame_shift_ms_ = frame_shift_ms_;
  out.data_.assign(data_.begin() + begin * cols_, data_.begin() + end * cols_);
  return out;
}

FeatureMatrix FeatureMatrix::gather_rows(
    std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.rows_ = indices.size();
  out.cols_ = cols_;
  out.frame_shift_ms_ = frame_shift_ms_;
  out.data_.resize(indices.size() * cols_);
  double* dst = out.data_.data();
  for (std::size_t idx : indices) {
    std::copy_n(data_.data() + idx * cols_, cols_, dst);
    dst += cols_;
  }
  return out;
}

bool FeatureMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void write_fmb1(std::ostream& out, const FeatureMatrix& m) {
  constexpr auto kMax = std::numeric_limits<uint32_t>::max();
  if (m.rows() > kMax || m.cols() > kMax) {
    throw_input("feature matrix too large for FMB1");
  }
  binio::put_magic(out, "FMB1");
  binio::put_u32(out, static_cast<uint32_t>(m.rows()));
  binio::put_u32(out, static_cast<uint32_t>(m.cols()));
  for (double v : m.values()) binio::put_f32(out, static_cast<float>(v));
}

void write_fmb1(const std::string& path, const FeatureMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_input("cannot open '" + path + "' for writing");
  write_fmb1(out, m);
  if (!out.flush()) throw_input("write failed for '" + path + "'");
}

FeatureMatrix read_fmb1(std::istream& in) {
  binio::expect_magic(in, "FMB1");
  const uint32_t rows = binio::get_u32(in, "FMB1 frame count");
  const uint32_t cols = binio::get_u32(in, "FMB1 dimension");
  std::vector<double> data(static_cast<std::size_t>(rows) * cols);
  for (double& v : data) {
    v = binio::get_f32(in, "FMB1 values");
    if (!std::isfinite(v)) throw_input("FMB1 contains non-finite value");
  }
  return FeatureMatrix(rows, cols, std::move(data));
}

FeatureMatrix read_fmb1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot open feature file '" + path + "'");
  try {
    return read_fmb1(in);
  } catch (const Error& e) {
    throw_input(path + ": " + e.what());
  }
}

std::pair<std::size_t, std::size_t> read_fmb1_shape(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot open feature file '" + path + "'");
  binio::expect_magic(in, "FMB1");
  const uint32_t rows = binio::get_u32(in, "FMB1 frame count");
  const uint32_t cols = binio::get_u32(in, "FMB1 dimension");
  return {rows, cols};
}

}  // namespace augpipe

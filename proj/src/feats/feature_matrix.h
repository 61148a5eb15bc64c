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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace augpipe {

/// Time-major frames x channels matrix. Row t is the feature vector of frame t.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double frame_shift_ms() const { return frame_shift_ms_; }
  void set_frame_shift_ms(double ms) { frame_shift_ms_ = ms; }

  double& operator()(std::size_t t, std::size_t d) { return data_[t * cols_ + d]; }
  double operator()(std::size_t t, std::size_t d) const {
    return data_[t * cols_ + d];
  }

  std::span<double> row(std::size_t t) {
    return {data_.data() + t * cols_, cols_};
  }
  std::span<const double> row(std::size_t t) const {
    return {data_.data() + t * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  /// Rows [begin, end) as a new matrix.
  FeatureMatrix slice_rows(std::size_t begin, std::size_t end) const;

  /// Rows at the given indices, in order. Indices must be < rows().
  FeatureMatrix gather_rows(std::span<const std::size_t> indices) const;

  bool all_finite() const;

  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double frame_shift_ms_ = 10.0;
  std::vector<double> data_;
};

// FMB1 files: "FMB1", u32 T, u32 D (little endian), then T*D little-endian f32
// values, row major. Values are narrowed to float on write.
void write_fmb1(std::ostream& out, const FeatureMatrix& m);
void write_fmb1(const std::string& path, const FeatureMatrix& m);
FeatureMatrix read_fmb1(std::istream& in);
FeatureMatrix read_fmb1(const std::string& path);

/// Reads only the header of an FMB1 file, returning {T, D}.
std::pair<std::size_t, std::size_t> read_fmb1_shape(const std::string& path);

}  // namespace augpipe

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

#include "feats/render.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "common/error.h"

namespace augpipe {

void write_pgm(std::ostream& out, const FeatureMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw_input("cannot render an empty matrix");
  auto values = m.values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;

  const std::size_t width = m.rows();
  const std::size_t height = m.cols();
  std::vector<unsigned char> pixels(width * height, 0);
  if (range > 0) {
    for (std::size_t t = 0; t < width; ++t) {
      for (std::size_t d = 0; d < height; ++d) {
        const double v = std::round(255.0 * (m(t, d) - min) / range);
        pixels[(height - 1 - d) * width + t] = static_cast<unsigned char>(v);
      }
    }
  }
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
}

void write_pgm(const std::string& path, const FeatureMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw_input("cannot render an empty matrix");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_input("cannot open '" + path + "' for writing");
  write_pgm(out, m);
}

}  // namespace augpipe

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

#include <iosfwd>
#include <string>

#include "feats/feature_matrix.h"

namespace augpipe {

// Binary PGM (P5), width T, height D, maxval 255. Pixel (x = t, y = D-1-d)
// holds round(255 * (v - min) / (max - min)), so channel 0 is the bottom row.
// A constant matrix renders all black. Throws on an empty matrix.
void write_pgm(std::ostream& out, const FeatureMatrix& m);
void write_pgm(const std::string& path, const FeatureMatrix& m);

}  // namespace augpipe

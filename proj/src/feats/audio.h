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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace augpipe {

/// Mono 16-bit PCM at 8 or 16 kHz.
struct AudioBuffer {
  std::vector<int16_t> samples;
  uint32_t sample_rate = 8000;
  uint16_t channel_count = 1;

  /// Throws unless mono and the rate is 8000 or 16000.
  void validate() const;
};

// RIFF/WAVE, PCM 16-bit mono only. WAVE_FORMAT_EXTENSIBLE is accepted when its
// sub-format is PCM; anything compressed is rejected with an input error.
AudioBuffer read_wav(std::istream& in);
AudioBuffer read_wav(const std::string& path);
void write_wav(std::ostream& out, const AudioBuffer& audio);
void write_wav(const std::string& path, const AudioBuffer& audio);

}  // namespace augpipe

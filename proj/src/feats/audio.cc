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

#include "feats/audio.h"

#include <cstring>
#include <fstream>

#include "common/binary_io.h"
#include "common/error.h"

namespace augpipe {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t get_u16(std::istream& in) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2)) throw_input("truncated WAV header");
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void put_u16(std::ostream& out, uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void read_tag(std::istream& in, char (&tag)[4]) {
  if (!in.read(tag, 4)) throw_input("truncated WAV file");
}

}  // namespace

void AudioBuffer::validate() const {
  if (channel_count != 1) {
    throw_input("expected mono audio, got " + std::to_string(channel_count) +
                " channels");
  }
  if (sample_rate != 8000 && sample_rate != 16000) {
    throw_input("unsupported sample rate " + std::to_string(sample_rate) +
                " (expected 8000 or 16000)");
  }
}

AudioBuffer read_wav(std::istream& in) {
  char tag[4];
  read_tag(in, tag);
  if (std::memcmp(tag, "RIFF", 4) != 0) throw_input("not a RIFF file");
  binio::get_u32(in, "RIFF size");
  read_tag(in, tag);
  if (std::memcmp(tag, "WAVE", 4) != 0) throw_input("not a WAVE file");

  AudioBuffer audio;
  bool have_fmt = false;
  uint16_t bits = 0;
  for (;;) {
    read_tag(in, tag);
    uint32_t size = binio::get_u32(in, "chunk size");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) throw_input("fmt chunk too small");
      uint16_t format = get_u16(in);
      audio.channel_count = get_u16(in);
      audio.sample_rate = binio::get_u32(in, "sample rate");
      binio::get_u32(in, "byte rate");
      get_u16(in);  // block align
      bits = get_u16(in);
      uint32_t consumed = 16;
      if (format == kFormatExtensible && size >= 40) {
        get_u16(in);  // cbSize
        get_u16(in);  // valid bits
        binio::get_u32(in, "channel mask");
        format = get_u16(in);  // first two bytes of the sub-format GUID
        consumed += 10;
      }
      if (format != kFormatPcm) {
        throw_input("unsupported WAV codec (format tag " +
                    std::to_string(format) + "); only PCM is accepted");
      }
      if (bits != 16) {
        throw_input("unsupported sample width " + std::to_string(bits) +
                    " bits; only 16-bit PCM is accepted");
      }
      in.ignore(size - consumed + (size & 1));
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw_input("WAV data chunk before fmt chunk");
      audio.samples.resize(size / 2);
      for (auto& s : audio.samples) s = static_cast<int16_t>(get_u16(in));
      break;
    } else {
      in.ignore(size + (size & 1));
      if (!in) throw_input("WAV file has no data chunk");
    }
  }
  audio.validate();
  return audio;
}

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot open audio file '" + path + "'");
  try {
    return read_wav(in);
  } catch (const Error& e) {
    throw_input(path + ": " + e.what());
  }
}

void write_wav(std::ostream& out, const AudioBuffer& audio) {
  audio.validate();
  const uint32_t data_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
  out.write("RIFF", 4);
  binio::put_u32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  binio::put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  binio::put_u32(out, audio.sample_rate);
  binio::put_u32(out, audio.sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.write("data", 4);
  binio::put_u32(out, data_bytes);
  for (int16_t s : audio.samples) put_u16(out, static_cast<uint16_t>(s));
}

void write_wav(const std::string& path, const AudioBuffer& audio) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_input("cannot open '" + path + "' for writing");
  write_wav(out, audio);
}

}  // namespace augpipe

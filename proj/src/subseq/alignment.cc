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

#include "subseq/alignment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "common/error.h"

namespace augpipe {
namespace {

std::vector<int32_t> parse_token_list(const std::string& field,
                                      const std::string& where) {
  std::vector<int32_t> out;
  const char* p = field.data();
  const char* end = p + field.size();
  while (p < end) {
    int32_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || (next != end && *next != ',')) {
      throw_input(where + ": bad token list '" + field + "'");
    }
    out.push_back(v);
    p = next == end ? end : next + 1;
  }
  if (out.empty()) throw_input(where + ": empty token list");
  return out;
}

std::size_t seconds_to_frame(double seconds, double frame_shift_ms) {
  return static_cast<std::size_t>(std::nearbyint(seconds * 1000.0 / frame_shift_ms));
}

}  // namespace

void WordAlignment::validate(std::size_t frames,
                             std::span<const int32_t> tokens) const {
  std::size_t prev_end = 0;
  std::size_t tok = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const AlignmentEntry& e = entries[i];
    const std::string where = "alignment entry " + std::to_string(i);
    if (e.start_frame >= e.end_frame) throw_input(where + " is empty");
    if (e.start_frame < prev_end) throw_input(where + " overlaps its predecessor");
    if (e.end_frame > frames) {
      throw_input(where + " ends at frame " + std::to_string(e.end_frame) +
                  " beyond " + std::to_string(frames) + " frames");
    }
    prev_end = e.end_frame;
    for (int32_t id : e.tokens) {
      if (tok >= tokens.size() || tokens[tok] != id) {
        throw_input("alignment tokens do not match the transcript");
      }
      ++tok;
    }
  }
  if (tok != tokens.size()) {
    throw_input("alignment tokens do not match the transcript");
  }
}

std::vector<int32_t> WordAlignment::tokens_between(std::size_t first,
                                                   std::size_t last) const {
  std::vector<int32_t> out;
  for (std::size_t i = first; i <= last; ++i) {
    out.insert(out.end(), entries[i].tokens.begin(), entries[i].tokens.end());
  }
  return out;
}

void WordAlignment::clamp_to(std::size_t frames) {
  for (AlignmentEntry& e : entries) {
    if (e.start_frame >= frames) {
      throw_input("aligned word starts at frame " + std::to_string(e.start_frame) +
                  " past the end of a " + std::to_string(frames) +
                  "-frame utterance");
    }
    if (e.end_frame > frames) e.end_frame = frames;
  }
}

AlignmentMap read_alignments(std::istream& in, double frame_shift_ms) {
  if (!(frame_shift_ms > 0.0)) throw_config("frame shift must be positive");
  AlignmentMap out;
  std::map<std::string, double> last_start;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string utt, toks;
    double start = 0.0, dur = 0.0;
    if (!(fields >> utt) || utt[0] == ';' || utt[0] == '#') continue;
    const std::string where = "alignment line " + std::to_string(line_no);
    std::string extra;
    if (!(fields >> toks >> start >> dur) || (fields >> extra)) {
      throw_input(where + ": expected '<utt> <tokens> <start> <duration>'");
    }
    if (!std::isfinite(start) || !std::isfinite(dur) || start < 0.0 || dur <= 0.0) {
      throw_input(where + ": invalid time");
    }
    auto [it, fresh] = last_start.try_emplace(utt, start);
    if (!fresh) {
      if (start < it->second) throw_input(where + ": not sorted by start time");
      it->second = start;
    }
    AlignmentEntry e;
    e.tokens = parse_token_list(toks, where);
    e.start_frame = seconds_to_frame(start, frame_shift_ms);
    e.end_frame = std::max(seconds_to_frame(start + dur, frame_shift_ms),
                           e.start_frame + 1);
    out[utt].entries.push_back(std::move(e));
  }
  return out;
}

AlignmentMap read_alignments(const std::string& path, double frame_shift_ms) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open alignment file '" + path + "'");
  return read_alignments(in, frame_shift_ms);
}

}  // namespace augpipe

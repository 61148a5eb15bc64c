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
#include <vector>

#include "feats/normalize.h"
#include "pipeline/utterance.h"

namespace augpipe {

// Manifest: JSON Lines, one utterance per line.
//
//   {"id": "u1", "conversation_id": "c1", "audio": "u1.wav",
//    "tokens": [5, 9], "alignment": "train.ali"}
//
// Exactly one of "audio" / "features" (an FMB1 path). "alignment" is optional.
// Statically expanded entries also carry "frames": [start, end] and
// "source": "<original id>". Relative paths are kept verbatim; resolve them
// against the manifest's directory with resolve_path().

std::vector<Utterance> parse_manifest(std::istream& in);
std::vector<Utterance> load_manifest(const std::string& path);

/// Writes one JSON line per utterance. Relative paths are rebased from
/// `from_dir` to `to_dir` so the output stays valid wherever it is written.
void write_manifest(std::ostream& out, const std::vector<Utterance>& utts,
                    const std::string& from_dir = "",
                    const std::string& to_dir = "");
void write_manifest(const std::string& path, const std::vector<Utterance>& utts,
                    const std::string& from_dir);

/// Directory containing `path` ("" for a bare file name).
std::string parent_dir(const std::string& path);

/// `path` if absolute or base is empty, else base/path.
std::string resolve_path(const std::string& base, const std::string& path);

// Conversation statistics file: JSON object keyed by conversation id, each
// value {"mean": [...], "variance": [...], "frame_count": n}.
void write_stats(const std::string& path, const StatsMap& stats);
StatsMap read_stats(const std::string& path);

}  // namespace augpipe

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

#include "pipeline/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "common/error.h"

namespace augpipe {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw_input("manifest line " + std::to_string(line_no) + ": " + what);
}

std::string require_string(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) bad_line(line_no, std::string("missing field '") + key + "'");
  if (!it->is_string() || it->get_ref<const std::string&>().empty()) {
    bad_line(line_no, std::string("field '") + key + "' must be a non-empty string");
  }
  return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  return require_string(obj, key, line_no);
}

Utterance parse_line(const std::string& text, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    bad_line(line_no, std::string("invalid JSON (") + e.what() + ")");
  }
  if (!obj.is_object()) bad_line(line_no, "expected a JSON object");

  Utterance u;
  u.id = require_string(obj, "id", line_no);
  u.conversation_id = require_string(obj, "conversation_id", line_no);
  u.audio_path = optional_string(obj, "audio", line_no);
  u.feature_path = optional_string(obj, "features", line_no);
  if (u.audio_path.empty() == u.feature_path.empty()) {
    bad_line(line_no, "exactly one of 'audio' or 'features' is required");
  }

  auto tok = obj.find("tokens");
  if (tok == obj.end()) bad_line(line_no, "missing field 'tokens'");
  if (!tok->is_array() || tok->empty()) {
    bad_line(line_no, "field 'tokens' must be a non-empty integer array");
  }
  for (const json& t : *tok) {
    if (!t.is_number_integer()) bad_line(line_no, "field 'tokens' must hold integers");
    const auto v = t.get<int64_t>();
    if (v < INT32_MIN || v > INT32_MAX) bad_line(line_no, "token id out of range");
    u.tokens.push_back(static_cast<int32_t>(v));
  }

  u.alignment_path = optional_string(obj, "alignment", line_no);
  u.source_id = optional_string(obj, "source", line_no);
  if (auto fr = obj.find("frames"); fr != obj.end()) {
    if (!fr->is_array() || fr->size() != 2 || !(*fr)[0].is_number_unsigned() ||
        !(*fr)[1].is_number_unsigned() ||
        (*fr)[0].get<std::size_t>() >= (*fr)[1].get<std::size_t>()) {
      bad_line(line_no, "field 'frames' must be [start, end] with start < end");
    }
    u.frame_range = std::make_pair((*fr)[0].get<std::size_t>(),
                                   (*fr)[1].get<std::size_t>());
  }
  return u;
}

std::string rebase(const std::string& p, const std::string& from_dir,
                   const std::string& to_dir) {
  if (p.empty() || fs::path(p).is_absolute() || from_dir == to_dir) return p;
  const fs::path abs = fs::absolute(fs::path(from_dir.empty() ? "." : from_dir) / p);
  const fs::path to = fs::absolute(to_dir.empty() ? "." : to_dir);
  return abs.lexically_normal().lexically_relative(to.lexically_normal()).string();
}

}  // namespace

std::vector<Utterance> parse_manifest(std::istream& in) {
  std::vector<Utterance> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Utterance u = parse_line(line, line_no);
    if (!seen.insert(u.id).second) bad_line(line_no, "duplicate id '" + u.id + "'");
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Utterance> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open manifest '" + path + "'");
  return parse_manifest(in);
}

void write_manifest(std::ostream& out, const std::vector<Utterance>& utts,
                    const std::string& from_dir, const std::string& to_dir) {
  for (const Utterance& u : utts) {
    json obj;
    obj["id"] = u.id;
    obj["conversation_id"] = u.conversation_id;
    if (!u.audio_path.empty()) {
      obj["audio"] = rebase(u.audio_path, from_dir, to_dir);
    } else {
      obj["features"] = rebase(u.feature_path, from_dir, to_dir);
    }
    obj["tokens"] = u.tokens;
    if (!u.alignment_path.empty() && !u.is_subsequence()) {
      obj["alignment"] = rebase(u.alignment_path, from_dir, to_dir);
    }
    if (u.frame_range) {
      obj["frames"] = {u.frame_range->first, u.frame_range->second};
    }
    if (!u.source_id.empty()) obj["source"] = u.source_id;
    out << obj.dump() << '\n';
  }
}

void write_manifest(const std::string& path, const std::vector<Utterance>& utts,
                    const std::string& from_dir) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw_input("cannot open '" + path + "' for writing");
  write_manifest(out, utts, from_dir, parent_dir(path));
  if (!out.flush()) throw_input("write failed for '" + path + "'");
}

std::string parent_dir(const std::string& path) {
  return fs::path(path).parent_path().string();
}

std::string resolve_path(const std::string& base, const std::string& path) {
  if (base.empty() || path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).string();
}

void write_stats(const std::string& path, const StatsMap& stats) {
  json obj = json::object();
  for (const auto& [id, s] : stats) {
    obj[id] = {{"mean", s.mean},
               {"variance", s.variance},
               {"frame_count", s.frame_count}};
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw_input("cannot open '" + path + "' for writing");
  out << obj.dump(1) << '\n';
}

StatsMap read_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open stats file '" + path + "'");
  StatsMap out;
  try {
    const json obj = json::parse(in);
    for (const auto& [id, v] : obj.items()) {
      ConversationStats s;
      s.conversation_id = id;
      s.mean = v.at("mean").get<std::vector<double>>();
      s.variance = v.at("variance").get<std::vector<double>>();
      s.frame_count = v.at("frame_count").get<std::size_t>();
      out.emplace(id, std::move(s));
    }
  } catch (const json::exception& e) {
    throw_input("stats file '" + path + "': " + e.what());
  }
  return out;
}

}  // namespace augpipe

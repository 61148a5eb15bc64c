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

#include "pipeline/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "common/error.h"

namespace augpipe {
namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kTopKeys = {"preset", "seed",         "workers",
                                        "epoch",  "token_budget", "stack_k",
                                        "length_sort"};
const std::map<std::string, std::set<std::string>> kSectionKeys = {
    {"mel", {"n_mels", "win_ms", "hop_ms", "fmin", "fmax", "fft_size", "log_floor"}},
    {"stretch", {"enabled", "window", "low", "high"}},
    {"mask", {"enabled", "repeats", "f_max", "t_max", "value"}},
    {"subseq", {"enabled", "mode", "alpha"}},
};

uint64_t to_u64(const std::string& key, const std::string& text) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw_config("config key '" + key + "': expected a non-negative integer, got '" +
                 text + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw_config("config key '" + key + "': expected a number, got '" + text + "'");
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw_config("config key '" + key + "': expected true or false, got '" + text + "'");
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& path) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    return v ? std::optional<std::string>(*v) : std::nullopt;
  }

  // A present section is enabled unless it says `enabled = false`; nullopt
  // when the section is absent so presets stay in effect.
  std::optional<bool> section_enabled(const std::string& name) const {
    if (!tree_.get_child_optional(name)) return std::nullopt;
    auto v = get(name + ".enabled");
    return v ? to_bool(name + ".enabled", *v) : true;
  }

  template <typename T, typename Conv>
  void maybe(const std::string& path, T& dst, Conv conv) const {
    if (auto v = get(path)) dst = static_cast<T>(conv(path, *v));
  }

 private:
  const pt::ptree& tree_;
};

void check_known_keys(const pt::ptree& tree) {
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      if (!kTopKeys.count(key)) throw_config("unknown config key '" + key + "'");
      continue;
    }
    auto section = kSectionKeys.find(key);
    if (section == kSectionKeys.end()) {
      throw_config("unknown config section [" + key + "]");
    }
    for (const auto& [sub, ignored] : node) {
      if (!section->second.count(sub)) {
        throw_config("unknown config key '" + key + "." + sub + "'");
      }
    }
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (token_budget < 1) throw_config("token_budget must be >= 1");
  if (workers < 1) throw_config("workers must be >= 1");
  if (stack_k < 1) throw_config("stack_k must be >= 1");
  if (stretch) stretch->validate();
  if (mask) mask->validate();
  if (subseq) subseq->validate();
}

PipelineConfig preset_config(const std::string& name) {
  PipelineConfig cfg;
  if (name == "lstm-300h") {
    cfg.stretch = StretchPolicy{};
    cfg.mask = MaskPolicy{};
    cfg.mask->repeats = 2;
    cfg.stack_k = 1;
  } else if (name == "attn-300h") {
    cfg.stretch = StretchPolicy{};
    cfg.mask = MaskPolicy{};
    cfg.mask->repeats = 1;
    cfg.stack_k = 4;
  } else {
    throw_config("unknown preset '" + name + "' (expected lstm-300h or attn-300h)");
  }
  return cfg;
}

void apply_env_overrides(PipelineConfig& cfg) {
  if (const char* s = std::getenv("AUGPIPE_SEED"); s != nullptr && *s != '\0') {
    cfg.seed = to_u64("AUGPIPE_SEED", s);
  }
}

PipelineConfig parse_config(std::istream& in, const std::string& preset_override) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw_config(std::string("config parse error: ") + e.what());
  }
  check_known_keys(tree);
  const Reader r(tree);

  std::string preset = preset_override.empty() ? r.get("preset").value_or("")
                                               : preset_override;
  PipelineConfig cfg = preset.empty() ? PipelineConfig{} : preset_config(preset);

  r.maybe("seed", cfg.seed, to_u64);
  r.maybe("workers", cfg.workers, to_u64);
  r.maybe("epoch", cfg.epoch, to_u64);
  r.maybe("token_budget", cfg.token_budget, to_u64);
  r.maybe("stack_k", cfg.stack_k, to_u64);
  r.maybe("length_sort", cfg.length_sort, to_bool);

  r.maybe("mel.n_mels", cfg.mel.n_mels, to_u64);
  r.maybe("mel.win_ms", cfg.mel.win_ms, to_double);
  r.maybe("mel.hop_ms", cfg.mel.hop_ms, to_double);
  r.maybe("mel.fmin", cfg.mel.fmin, to_double);
  r.maybe("mel.fmax", cfg.mel.fmax, to_double);
  r.maybe("mel.fft_size", cfg.mel.fft_size, to_u64);
  r.maybe("mel.log_floor", cfg.mel.log_floor, to_double);

  if (auto on = r.section_enabled("stretch")) {
    if (*on) {
      if (!cfg.stretch) cfg.stretch = StretchPolicy{};
    } else {
      cfg.stretch.reset();
    }
  }
  if (cfg.stretch) {
    if (auto w = r.get("stretch.window")) {
      cfg.stretch->window = (*w == "inf" || *w == "infinite")
                                ? StretchPolicy::kInfinite
                                : to_u64("stretch.window", *w);
    }
    r.maybe("stretch.low", cfg.stretch->low, to_double);
    r.maybe("stretch.high", cfg.stretch->high, to_double);
  }

  if (auto on = r.section_enabled("mask")) {
    if (*on) {
      if (!cfg.mask) cfg.mask = MaskPolicy{};
    } else {
      cfg.mask.reset();
    }
  }
  if (cfg.mask) {
    // The literal default widths (70 channels, 7 frames) look transposed for
    // 40-channel features, so they are never used implicitly from a file.
    if (!r.get("mask.f_max") || !r.get("mask.t_max")) {
      throw_config("masking is enabled: set mask.f_max and mask.t_max explicitly");
    }
    r.maybe("mask.repeats", cfg.mask->repeats, to_u64);
    r.maybe("mask.f_max", cfg.mask->f_max, to_u64);
    r.maybe("mask.t_max", cfg.mask->t_max, to_u64);
    r.maybe("mask.value", cfg.mask->mask_value, to_double);
  }

  if (auto on = r.section_enabled("subseq")) {
    if (*on) {
      if (!cfg.subseq) cfg.subseq = SubseqPolicy{};
    } else {
      cfg.subseq.reset();
    }
  }
  if (cfg.subseq) {
    if (auto mode = r.get("subseq.mode")) {
      if (*mode == "dynamic") {
        cfg.subseq->mode = SubseqMode::kDynamic;
      } else if (*mode == "static") {
        cfg.subseq->mode = SubseqMode::kStatic;
      } else {
        throw_config("subseq.mode must be 'dynamic' or 'static'");
      }
    }
    r.maybe("subseq.alpha", cfg.subseq->alpha, to_double);
  }

  apply_env_overrides(cfg);
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path,
                           const std::string& preset_override) {
  std::ifstream in(path);
  if (!in) throw_config("cannot open config file '" + path + "'");
  return parse_config(in, preset_override);
}

}  // namespace augpipe

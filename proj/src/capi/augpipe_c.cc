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

#include "augpipe/augpipe.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "augment/spec_augment.h"
#include "augment/time_stretch.h"
#include "common/error.h"
#include "common/parallel.h"
#include "common/rng.h"
#include "feats/audio.h"
#include "feats/feature_matrix.h"
#include "feats/logmel.h"
#include "feats/render.h"
#include "pipeline/bench.h"
#include "pipeline/config.h"
#include "pipeline/manifest.h"
#include "pipeline/pipeline.h"
#include "pipeline/schedule.h"
#include "subseq/subseq.h"

struct augpipe_features {
  augpipe::FeatureMatrix m;
};

struct augpipe_draws {
  augpipe::AugmentTrace trace;
};

struct augpipe_config {
  augpipe::PipelineConfig cfg;
};

namespace {

namespace fs = std::filesystem;
using namespace augpipe;

thread_local std::string g_last_error;

augpipe_status fail(augpipe_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
augpipe_status guarded(Fn&& fn) {
  try {
    fn();
    return AUGPIPE_OK;
  } catch (const Error& e) {
    return fail(e.kind() == ErrorKind::kConfig ? AUGPIPE_ERR_CONFIG : AUGPIPE_ERR_INPUT,
                e.what());
  } catch (const std::bad_alloc&) {
    return fail(AUGPIPE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AUGPIPE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AUGPIPE_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw_config(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string file_stem_for(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!keep) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

// Writes through a temporary sibling so a failure leaves no partial file.
template <typename WriteFn>
void write_atomically(const std::string& path, WriteFn&& write) {
  const std::string tmp = path + ".partial";
  try {
    write(tmp);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

PipelineConfig resolved(const augpipe_config* cfg) {
  return cfg ? cfg->cfg : PipelineConfig{};
}

}  // namespace

extern "C" {

const char* augpipe_version(void) { return "0.1.0"; }

const char* augpipe_last_error(void) { return g_last_error.c_str(); }

void augpipe_string_free(char* s) { std::free(s); }

// ---- Feature matrices -----------------------------------------------------

augpipe_status augpipe_features_create(size_t rows, size_t cols, const float* values,
                                       augpipe_features** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    require(values != nullptr || rows * cols == 0, "values must not be NULL");
    auto f = std::make_unique<augpipe_features>();
    f->m = FeatureMatrix(rows, cols);
    auto dst = f->m.values();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = values[i];
    *out = f.release();
  });
}

augpipe_status augpipe_features_read(const char* path, augpipe_features** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    auto f = std::make_unique<augpipe_features>();
    f->m = read_fmb1(std::string(path));
    *out = f.release();
  });
}

augpipe_status augpipe_features_write(const augpipe_features* f, const char* path) {
  return guarded([&] {
    require(f != nullptr && path != nullptr, "features and path must not be NULL");
    write_atomically(path, [&](const std::string& tmp) { write_fmb1(tmp, f->m); });
  });
}

augpipe_status augpipe_features_from_pcm(const int16_t* samples, size_t count,
                                         uint32_t sample_rate,
                                         const augpipe_config* cfg,
                                         augpipe_features** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    require(samples != nullptr || count == 0, "samples must not be NULL");
    AudioBuffer audio;
    audio.samples.assign(samples, samples + count);
    audio.sample_rate = sample_rate;
    audio.channel_count = 1;
    const MelConfig mel = cfg ? cfg->cfg.mel : MelConfig{};
    auto f = std::make_unique<augpipe_features>();
    f->m = extract_logmel(audio, mel);
    *out = f.release();
  });
}

size_t augpipe_features_rows(const augpipe_features* f) { return f ? f->m.rows() : 0; }

size_t augpipe_features_cols(const augpipe_features* f) { return f ? f->m.cols() : 0; }

augpipe_status augpipe_features_copy(const augpipe_features* f, float* dst,
                                     size_t capacity) {
  return guarded([&] {
    require(f != nullptr, "features must not be NULL");
    const auto values = f->m.values();
    require(dst != nullptr || values.empty(), "dst must not be NULL");
    require(capacity >= values.size(), "destination buffer too small");
    for (size_t i = 0; i < values.size(); ++i) dst[i] = static_cast<float>(values[i]);
  });
}

augpipe_status augpipe_features_render_pgm(const augpipe_features* f, const char* path) {
  return guarded([&] {
    require(f != nullptr && path != nullptr, "features and path must not be NULL");
    write_atomically(path, [&](const std::string& tmp) { write_pgm(tmp, f->m); });
  });
}

void augpipe_features_free(augpipe_features* f) { delete f; }

// ---- Input augmentation ---------------------------------------------------

void augpipe_augment_params_init(augpipe_augment_params* p) {
  if (!p) return;
  const StretchPolicy stretch;
  p->stretch_enabled = 1;
  p->stretch_window = 0;
  p->stretch_low = stretch.low;
  p->stretch_high = stretch.high;
  p->mask_enabled = 0;
  p->mask_repeats = 1;
  p->mask_f_max = 0;
  p->mask_t_max = 0;
  p->mask_value = 0.0;
}

augpipe_status augpipe_augment(const augpipe_features* in,
                               const augpipe_augment_params* params, uint64_t seed,
                               augpipe_features** out, augpipe_draws** draws) {
  return guarded([&] {
    require(in != nullptr && params != nullptr && out != nullptr,
            "features, params and out must not be NULL");
    std::optional<StretchPolicy> stretch;
    if (params->stretch_enabled) {
      stretch.emplace();
      stretch->window =
          params->stretch_window == 0 ? StretchPolicy::kInfinite : params->stretch_window;
      stretch->low = params->stretch_low;
      stretch->high = params->stretch_high;
      stretch->validate();
    }
    std::optional<MaskPolicy> mask;
    if (params->mask_enabled) {
      mask.emplace();
      mask->repeats = params->mask_repeats;
      mask->f_max = params->mask_f_max;
      mask->t_max = params->mask_t_max;
      mask->mask_value = params->mask_value;
      mask->validate();
    }
    Rng rng(seed);
    AugmentResult result = apply_input_augment_traced(in->m, stretch, mask, rng);
    auto f = std::make_unique<augpipe_features>();
    f->m = std::move(result.features);
    std::unique_ptr<augpipe_draws> d;
    if (draws) {
      d = std::make_unique<augpipe_draws>();
      d->trace = std::move(result.trace);
    }
    *out = f.release();
    if (draws) *draws = d.release();
  });
}

size_t augpipe_draws_stretch_count(const augpipe_draws* d) {
  return d && d->trace.stretch ? d->trace.stretch->factors.size() : 0;
}

double augpipe_draws_stretch_factor(const augpipe_draws* d, size_t i) {
  if (i >= augpipe_draws_stretch_count(d)) return 0.0;
  return d->trace.stretch->factors[i];
}

size_t augpipe_draws_index_count(const augpipe_draws* d) {
  return d && d->trace.stretch ? d->trace.stretch->indices.size() : 0;
}

uint64_t augpipe_draws_index(const augpipe_draws* d, size_t i) {
  if (i >= augpipe_draws_index_count(d)) return 0;
  return d->trace.stretch->indices[i];
}

size_t augpipe_draws_mask_count(const augpipe_draws* d) {
  return d ? d->trace.masks.size() : 0;
}

augpipe_status augpipe_draws_mask(const augpipe_draws* d, size_t i,
                                  augpipe_mask_rect* out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "draws and out must not be NULL");
    require(i < d->trace.masks.size(), "mask index out of range");
    const MaskRect& r = d->trace.masks[i];
    out->axis = r.axis == MaskAxis::kFrequency ? AUGPIPE_MASK_FREQUENCY : AUGPIPE_MASK_TIME;
    out->drawn_width = r.drawn_width;
    out->start = r.start;
    out->width = r.width;
  });
}

void augpipe_draws_free(augpipe_draws* d) { delete d; }

// ---- Pipeline configuration -----------------------------------------------

augpipe_status augpipe_config_load(const char* path, const char* preset,
                                   augpipe_config** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    auto c = std::make_unique<augpipe_config>();
    const std::string preset_name = preset ? preset : "";
    if (path) {
      c->cfg = load_config(path, preset_name);
    } else {
      std::istringstream empty;
      c->cfg = parse_config(empty, preset_name);
    }
    *out = c.release();
  });
}

void augpipe_config_set_seed(augpipe_config* cfg, uint64_t seed) {
  if (cfg) cfg->cfg.seed = seed;
}

augpipe_status augpipe_config_set_workers(augpipe_config* cfg, size_t workers) {
  return guarded([&] {
    require(cfg != nullptr, "config must not be NULL");
    require(workers >= 1, "workers must be >= 1");
    cfg->cfg.workers = workers;
  });
}

void augpipe_config_set_epoch(augpipe_config* cfg, uint64_t epoch) {
  if (cfg) cfg->cfg.epoch = epoch;
}

uint64_t augpipe_config_seed(const augpipe_config* cfg) { return cfg ? cfg->cfg.seed : 0; }

void augpipe_config_free(augpipe_config* cfg) { delete cfg; }

// ---- Corpus operations ----------------------------------------------------

augpipe_status augpipe_extract(const augpipe_config* cfg, const char* manifest,
                               const char* out_dir) {
  return guarded([&] {
    require(manifest != nullptr && out_dir != nullptr,
            "manifest and out_dir must not be NULL");
    const PipelineConfig pc = resolved(cfg);
    pc.validate();
    const std::string base = parent_dir(manifest);
    std::vector<Utterance> utts = load_manifest(manifest);

    // Feature files hold the whole source; entries with a frame range keep it.
    std::vector<FeatureMatrix> full(utts.size());
    std::vector<std::string> errors(utts.size());
    parallel_for(utts.size(), pc.workers, [&](std::size_t i, std::size_t) {
      Utterance u = utts[i];
      u.audio_path = resolve_path(base, u.audio_path);
      u.feature_path = resolve_path(base, u.feature_path);
      u.frame_range.reset();
      try {
        full[i] = load_features(u, pc.mel);
        const auto& r = utts[i].frame_range;
        if (r && (r->first >= r->second || r->second > full[i].rows())) {
          throw_input("frame range exceeds " + std::to_string(full[i].rows()) +
                      " frames");
        }
      } catch (const std::exception& e) {
        errors[i] = "utterance '" + utts[i].id + "': " + e.what();
      }
    });
    std::string joined;
    for (const std::string& e : errors) {
      if (!e.empty()) joined += (joined.empty() ? "" : "\n") + e;
    }
    if (!joined.empty()) throw_input(joined);

    std::set<std::string> stems;
    for (const Utterance& u : utts) {
      if (!stems.insert(file_stem_for(u.id)).second) {
        throw_input("utterance ids collide after file name mapping: '" + u.id + "'");
      }
    }

    for (std::size_t i = 0; i < utts.size(); ++i) {
      FeatureMatrix view = full[i];
      if (utts[i].frame_range) {
        view = full[i].slice_rows(utts[i].frame_range->first, utts[i].frame_range->second);
      }
      utts[i].features = std::move(view);
    }
    const StatsMap stats = corpus_stats(utts);

    fs::create_directories(out_dir);
    std::vector<Utterance> out_manifest = utts;
    for (std::size_t i = 0; i < utts.size(); ++i) {
      const std::string file = file_stem_for(utts[i].id) + ".fmb";
      const std::string path = (fs::path(out_dir) / file).string();
      write_atomically(path, [&](const std::string& tmp) { write_fmb1(tmp, full[i]); });
      Utterance& o = out_manifest[i];
      o.features.reset();
      o.alignment.reset();
      o.audio_path.clear();
      o.feature_path = file;
      o.alignment_path = o.alignment_path.empty()
                             ? ""
                             : fs::absolute(resolve_path(base, o.alignment_path))
                                   .lexically_normal()
                                   .string();
    }
    write_atomically((fs::path(out_dir) / "stats.json").string(),
                     [&](const std::string& tmp) { write_stats(tmp, stats); });
    // Feature paths are relative to out_dir; alignment paths are absolute.
    write_atomically((fs::path(out_dir) / "manifest.jsonl").string(),
                     [&](const std::string& tmp) {
                       std::ofstream os(tmp, std::ios::trunc);
                       if (!os) throw_input("cannot open '" + tmp + "' for writing");
                       write_manifest(os, out_manifest);
                       if (!os.flush()) throw_input("write failed for '" + tmp + "'");
                     });
  });
}

augpipe_status augpipe_subseq(const augpipe_config* cfg, const char* manifest,
                              const char* alignments, augpipe_subseq_mode mode,
                              double alpha, const char* out_path) {
  return guarded([&] {
    require(manifest != nullptr && out_path != nullptr,
            "manifest and out_path must not be NULL");
    require(mode == AUGPIPE_SUBSEQ_DYNAMIC || mode == AUGPIPE_SUBSEQ_STATIC,
            "unknown sub-sequence mode");
    PipelineConfig pc = resolved(cfg);
    SubseqPolicy policy;
    policy.alpha = alpha;
    policy.mode = mode == AUGPIPE_SUBSEQ_STATIC ? SubseqMode::kStatic : SubseqMode::kDynamic;
    policy.validate();
    pc.validate();

    const std::string base = parent_dir(manifest);
    std::vector<Utterance> utts = load_manifest(manifest);
    std::string missing;
    for (Utterance& u : utts) {
      if (u.is_subsequence()) continue;
      if (u.alignment_path.empty() && alignments) {
        // Relative to the working directory, like the manifest path itself.
        u.alignment_path = fs::absolute(alignments).lexically_normal().string();
      }
      if (u.alignment_path.empty()) missing += (missing.empty() ? "" : ", ") + u.id;
    }
    if (!missing.empty()) {
      throw_input("sub-sequence sampling requires alignment; missing for: " + missing);
    }
    // Paths as written in the input manifest, rebased on output.
    std::map<std::string, Utterance> as_listed;
    for (const Utterance& u : utts) as_listed.emplace(u.id, u);
    materialize(utts, pc, base);

    if (policy.mode == SubseqMode::kStatic) {
      std::vector<Utterance> expanded = expand_static(utts, Rng(pc.seed).split("static"));
      for (Utterance& e : expanded) {
        auto it = as_listed.find(e.id);
        if (it == as_listed.end()) it = as_listed.find(e.source_id);
        const Utterance& src = it->second;
        e.audio_path = src.audio_path;
        e.feature_path = src.feature_path;
        e.alignment_path = src.alignment_path;
      }
      write_atomically(out_path, [&](const std::string& tmp) {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw_input("cannot open '" + tmp + "' for writing");
        write_manifest(os, expanded, base, parent_dir(out_path));
        if (!os.flush()) throw_input("write failed for '" + tmp + "'");
      });
      return;
    }

    std::ostringstream report;
    for (const Utterance& u : utts) {
      nlohmann::json line;
      line["id"] = u.id;
      line["epoch"] = pc.epoch;
      const std::size_t frames = u.features->rows();
      std::optional<SubSequence> sub;
      if (u.alignment) {
        Rng rng = rng_for(pc.seed, u.id, pc.epoch, "subseq");
        sub = choose_subsequence(frames, *u.alignment, policy, rng);
      }
      if (sub) {
        line["variant"] = std::string(variant_name(sub->variant));
        line["frames"] = {sub->start, sub->end};
        line["tokens"] = u.alignment->tokens_between(sub->first_entry, sub->last_entry);
      } else {
        line["variant"] = nullptr;
        line["frames"] = {0, frames};
        line["tokens"] = u.tokens;
      }
      report << line.dump() << '\n';
    }
    write_atomically(out_path, [&](const std::string& tmp) {
      std::ofstream os(tmp, std::ios::trunc);
      if (!os) throw_input("cannot open '" + tmp + "' for writing");
      os << report.str();
      if (!os.flush()) throw_input("write failed for '" + tmp + "'");
    });
  });
}

augpipe_status augpipe_run(const augpipe_config* cfg, const char* manifest,
                           const char* out_path, char** summary) {
  return guarded([&] {
    require(manifest != nullptr && out_path != nullptr,
            "manifest and out_path must not be NULL");
    const PipelineConfig pc = resolved(cfg);
    std::vector<Utterance> utts = load_manifest(manifest);
    Abb1FileSink sink(out_path);
    const RunSummary s = run_pipeline(pc, std::move(utts), sink, parent_dir(manifest));
    if (summary) *summary = dup_string(s.to_json());
  });
}

augpipe_status augpipe_bench(const augpipe_config* cfg, const char* manifest,
                             double seconds, char** report) {
  return guarded([&] {
    require(manifest != nullptr && report != nullptr, "manifest and report must not be NULL");
    const PipelineConfig pc = resolved(cfg);
    std::vector<Utterance> utts = load_manifest(manifest);
    *report = dup_string(run_bench(pc, std::move(utts), parent_dir(manifest), seconds));
  });
}

double augpipe_lr_schedule(uint64_t step, double lr_peak, uint64_t warmup_steps,
                           uint64_t decay_steps, double decay_factor,
                           uint64_t total_steps) {
  double lr = -1.0;
  const augpipe_status st = guarded([&] {
    SchedulePolicy p;
    p.lr_peak = lr_peak;
    p.warmup_steps = warmup_steps;
    p.decay_steps = decay_steps;
    p.decay_factor = decay_factor;
    lr = lr_schedule(step, p, total_steps);
  });
  return st == AUGPIPE_OK ? lr : -1.0;
}

}  // extern "C"

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

// augpipe command-line tool.
//
//   augpipe [--seed N] [--config FILE] [--preset NAME] [--workers N]
//           [--epoch N] <subcommand> ...
//
// Exit status: 0 success, 1 input error, 2 configuration or usage error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "augpipe/augpipe.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;

int exit_code(augpipe_status st) {
  switch (st) {
    case AUGPIPE_OK:
      return kExitOk;
    case AUGPIPE_ERR_CONFIG:
      return kExitConfig;
    default:
      return kExitInput;
  }
}

int report(augpipe_status st) {
  if (st != AUGPIPE_OK) std::cerr << "augpipe: " << augpipe_last_error() << '\n';
  return exit_code(st);
}

struct ConfigDeleter {
  void operator()(augpipe_config* c) const { augpipe_config_free(c); }
};
struct FeaturesDeleter {
  void operator()(augpipe_features* f) const { augpipe_features_free(f); }
};
struct DrawsDeleter {
  void operator()(augpipe_draws* d) const { augpipe_draws_free(d); }
};
struct StringDeleter {
  void operator()(char* s) const { augpipe_string_free(s); }
};

using ConfigPtr = std::unique_ptr<augpipe_config, ConfigDeleter>;
using FeaturesPtr = std::unique_ptr<augpipe_features, FeaturesDeleter>;
using DrawsPtr = std::unique_ptr<augpipe_draws, DrawsDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct GlobalOptions {
  std::optional<uint64_t> seed;
  std::string config_path;
  std::string preset;
  std::optional<std::size_t> workers;
  std::optional<uint64_t> epoch;
};

// Config file, then AUGPIPE_SEED (applied by the library), then flags.
augpipe_status load_config(const GlobalOptions& g, ConfigPtr* out) {
  augpipe_config* raw = nullptr;
  augpipe_status st =
      augpipe_config_load(g.config_path.empty() ? nullptr : g.config_path.c_str(),
                          g.preset.empty() ? nullptr : g.preset.c_str(), &raw);
  if (st != AUGPIPE_OK) return st;
  out->reset(raw);
  if (g.seed) augpipe_config_set_seed(raw, *g.seed);
  if (g.epoch) augpipe_config_set_epoch(raw, *g.epoch);
  if (g.workers) {
    st = augpipe_config_set_workers(raw, *g.workers);
    if (st != AUGPIPE_OK) return st;
  }
  return AUGPIPE_OK;
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  return static_cast<bool>(out.flush());
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- augment --------------------------------------------------------------

struct AugmentOptions {
  std::string in;
  std::string out;
  std::string draw_log;
  bool no_stretch = false;
  std::string stretch_w = "inf";
  double stretch_low = 0.8;
  double stretch_high = 1.25;
  uint64_t mask_repeats = 0;
  std::optional<uint64_t> mask_f_max;
  std::optional<uint64_t> mask_t_max;
  double mask_value = 0.0;
};

// Plain-text record of every draw. Together with the input it determines the
// output: s values select frames through the stretch rule, mask lines give
// each band after clamping.
std::string draw_log(uint64_t seed, const augpipe_features* in,
                     const augpipe_features* out, const augpipe_augment_params& p,
                     const augpipe_draws* d) {
  std::ostringstream log;
  log << "seed " << seed << '\n';
  log << "input " << augpipe_features_rows(in) << ' ' << augpipe_features_cols(in)
      << '\n';
  if (p.stretch_enabled) {
    log << "stretch window "
        << (p.stretch_window == 0 ? std::string("inf") : std::to_string(p.stretch_window))
        << " low " << format_double(p.stretch_low) << " high "
        << format_double(p.stretch_high) << " draws "
        << augpipe_draws_stretch_count(d) << '\n';
    for (std::size_t i = 0; i < augpipe_draws_stretch_count(d); ++i) {
      log << "s " << i << ' ' << format_double(augpipe_draws_stretch_factor(d, i))
          << '\n';
    }
  } else {
    log << "stretch off\n";
  }
  if (p.mask_enabled) {
    log << "mask repeats " << p.mask_repeats << " f_max " << p.mask_f_max
        << " t_max " << p.mask_t_max << " value " << format_double(p.mask_value)
        << '\n';
    for (std::size_t i = 0; i < augpipe_draws_mask_count(d); ++i) {
      augpipe_mask_rect r;
      augpipe_draws_mask(d, i, &r);
      log << "rect " << i / 2 << ' '
          << (r.axis == AUGPIPE_MASK_FREQUENCY ? "freq" : "time") << " drawn "
          << r.drawn_width << " start " << r.start << " width " << r.width << '\n';
    }
  } else {
    log << "mask off\n";
  }
  log << "output " << augpipe_features_rows(out) << ' ' << augpipe_features_cols(out)
      << '\n';
  return log.str();
}

int cmd_augment(const GlobalOptions& g, const AugmentOptions& o) {
  augpipe_augment_params p;
  augpipe_augment_params_init(&p);
  p.stretch_enabled = o.no_stretch ? 0 : 1;
  if (o.stretch_w == "inf") {
    p.stretch_window = 0;
  } else {
    std::size_t used = 0;
    unsigned long long w = 0;
    try {
      w = std::stoull(o.stretch_w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != o.stretch_w.size() || w == 0 || o.stretch_w[0] == '-') {
      std::cerr << "augpipe: --stretch-w must be a positive integer or 'inf'\n";
      return kExitConfig;
    }
    p.stretch_window = w;
  }
  p.stretch_low = o.stretch_low;
  p.stretch_high = o.stretch_high;
  p.mask_enabled = o.mask_repeats > 0 ? 1 : 0;
  if (p.mask_enabled) {
    if (!o.mask_f_max || !o.mask_t_max) {
      std::cerr << "augpipe: --mask-T > 0 requires --mask-f-max and --mask-t-max\n";
      return kExitConfig;
    }
    p.mask_repeats = o.mask_repeats;
    p.mask_f_max = *o.mask_f_max;
    p.mask_t_max = *o.mask_t_max;
    p.mask_value = o.mask_value;
  }

  ConfigPtr cfg;
  if (augpipe_status st = load_config(g, &cfg); st != AUGPIPE_OK) return report(st);
  const uint64_t seed = augpipe_config_seed(cfg.get());

  augpipe_features* raw_in = nullptr;
  if (augpipe_status st = augpipe_features_read(o.in.c_str(), &raw_in); st != AUGPIPE_OK) {
    return report(st);
  }
  FeaturesPtr in(raw_in);
  augpipe_features* raw_out = nullptr;
  augpipe_draws* raw_draws = nullptr;
  if (augpipe_status st = augpipe_augment(in.get(), &p, seed, &raw_out, &raw_draws);
      st != AUGPIPE_OK) {
    return report(st);
  }
  FeaturesPtr out(raw_out);
  DrawsPtr draws(raw_draws);

  if (augpipe_status st = augpipe_features_write(out.get(), o.out.c_str()); st != AUGPIPE_OK) {
    return report(st);
  }
  const std::string log = draw_log(seed, in.get(), out.get(), p, draws.get());
  std::cout << log;
  if (!o.draw_log.empty() && !write_text(o.draw_log, log)) {
    std::cerr << "augpipe: cannot write draw log '" << o.draw_log << "'\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augpipe: speech feature augmentation pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(augpipe_version()));

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed (overrides AUGPIPE_SEED and the config)");
  app.add_option("--config", g.config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--preset", g.preset, "Named preset: lstm-300h or attn-300h");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--epoch", g.epoch, "Epoch index");

  std::string manifest;
  std::string out;

  auto* extract = app.add_subcommand("extract", "Extract log-mel features and statistics");
  extract->fallthrough();
  extract->add_option("--manifest", manifest, "Input manifest (JSONL)")->required();
  extract->add_option("--out", out, "Output directory")->required();

  AugmentOptions aug;
  auto* augment = app.add_subcommand("augment", "Augment one feature file and log the draws");
  augment->fallthrough();
  augment->add_option("--in", aug.in, "Input FMB1 file")->required();
  augment->add_option("--out", aug.out, "Output FMB1 file")->required();
  augment->add_option("--draw-log", aug.draw_log, "Also write the draw log to this file");
  augment->add_flag("--no-stretch", aug.no_stretch, "Disable time stretching");
  augment->add_option("--stretch-w", aug.stretch_w, "Stretch window in frames or 'inf'");
  augment->add_option("--stretch-low", aug.stretch_low, "Lowest stretch factor");
  augment->add_option("--stretch-high", aug.stretch_high, "Highest stretch factor");
  augment->add_option("--mask-T", aug.mask_repeats, "Mask rounds (0 disables masking)");
  augment->add_option("--mask-f-max", aug.mask_f_max, "Widest frequency band");
  augment->add_option("--mask-t-max", aug.mask_t_max, "Widest time band");
  augment->add_option("--mask-value", aug.mask_value, "Value written into masked cells");

  std::string alignments;
  std::string mode = "static";
  double alpha = 0.0;
  auto* subseq = app.add_subcommand("subseq", "Expand or sample word-aligned sub-sequences");
  subseq->fallthrough();
  subseq->add_option("--manifest", manifest, "Input manifest (JSONL)")->required();
  subseq->add_option("--alignments", alignments,
                     "Alignment file for entries without their own");
  subseq->add_option("--mode", mode, "static or dynamic")
      ->check(CLI::IsMember({"static", "dynamic"}));
  subseq->add_option("--alpha", alpha, "Replacement probability (dynamic mode)");
  subseq->add_option("--out", out, "Output manifest (static) or report (dynamic)")
      ->required();

  std::string summary_path;
  auto* run = app.add_subcommand("run", "Run one epoch and write ABB1 batches");
  run->fallthrough();
  run->add_option("--manifest", manifest, "Input manifest (JSONL)")->required();
  run->add_option("--out", out, "Output ABB1 file")->required();
  run->add_option("--summary", summary_path, "Write the run summary JSON here");

  double duration = 5.0;
  auto* bench = app.add_subcommand("bench", "Measure per-stage throughput");
  bench->fallthrough();
  bench->add_option("--manifest", manifest, "Input manifest (JSONL)")->required();
  bench->add_option("--duration", duration, "Measurement time in seconds")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--out", out, "Output JSON report")->required();

  std::string render_in;
  auto* render = app.add_subcommand("render", "Render a feature file as a PGM image");
  render->fallthrough();
  render->add_option("--in", render_in, "Input FMB1 file")->required();
  render->add_option("--out", out, "Output PGM file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (augment->parsed()) return cmd_augment(g, aug);

  if (render->parsed()) {
    augpipe_features* raw = nullptr;
    if (augpipe_status st = augpipe_features_read(render_in.c_str(), &raw); st != AUGPIPE_OK) {
      return report(st);
    }
    FeaturesPtr f(raw);
    return report(augpipe_features_render_pgm(f.get(), out.c_str()));
  }

  ConfigPtr cfg;
  if (augpipe_status st = load_config(g, &cfg); st != AUGPIPE_OK) return report(st);

  if (extract->parsed()) {
    return report(augpipe_extract(cfg.get(), manifest.c_str(), out.c_str()));
  }
  if (subseq->parsed()) {
    const auto m = mode == "static" ? AUGPIPE_SUBSEQ_STATIC : AUGPIPE_SUBSEQ_DYNAMIC;
    return report(augpipe_subseq(cfg.get(), manifest.c_str(),
                                 alignments.empty() ? nullptr : alignments.c_str(), m,
                                 alpha, out.c_str()));
  }
  if (run->parsed()) {
    char* raw = nullptr;
    if (augpipe_status st = augpipe_run(cfg.get(), manifest.c_str(), out.c_str(), &raw);
        st != AUGPIPE_OK) {
      return report(st);
    }
    StringPtr summary(raw);
    std::cout << summary.get() << '\n';
    if (!summary_path.empty() && !write_text(summary_path, summary.get())) {
      std::cerr << "augpipe: cannot write summary '" << summary_path << "'\n";
      return kExitInput;
    }
    return kExitOk;
  }
  if (bench->parsed()) {
    char* raw = nullptr;
    if (augpipe_status st = augpipe_bench(cfg.get(), manifest.c_str(), duration, &raw);
        st != AUGPIPE_OK) {
      return report(st);
    }
    StringPtr json(raw);
    if (!write_text(out, json.get())) {
      std::cerr << "augpipe: cannot write report '" << out << "'\n";
      return kExitInput;
    }
    std::cout << json.get() << '\n';
    return kExitOk;
  }
  return kExitConfig;
}

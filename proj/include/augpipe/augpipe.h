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

/*
 * augpipe C API.
 *
 * Every fallible call returns an augpipe_status. On failure the calling
 * thread's last error message is available from augpipe_last_error() until
 * the next failing call on that thread. Handles are opaque, owned by the
 * caller, and released with the matching *_free function; passing NULL to a
 * *_free function is a no-op. Strings returned through `char**` out
 * parameters are released with augpipe_string_free().
 *
 * Handles are not synchronized. Distinct handles may be used from different
 * threads concurrently.
 */

#ifndef AUGPIPE_AUGPIPE_H_
#define AUGPIPE_AUGPIPE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(AUGPIPE_BUILDING_LIBRARY)
#define AUGPIPE_API __declspec(dllexport)
#else
#define AUGPIPE_API __declspec(dllimport)
#endif
#else
#define AUGPIPE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum augpipe_status {
  AUGPIPE_OK = 0,
  /* Bad or unreadable input data: manifests, audio, features, alignments. */
  AUGPIPE_ERR_INPUT = 1,
  /* Invalid configuration, policy values or arguments. */
  AUGPIPE_ERR_CONFIG = 2,
  /* Unexpected failure inside the library. */
  AUGPIPE_ERR_INTERNAL = 3
} augpipe_status;

typedef struct augpipe_features augpipe_features;
typedef struct augpipe_draws augpipe_draws;
typedef struct augpipe_config augpipe_config;

AUGPIPE_API const char* augpipe_version(void);
AUGPIPE_API const char* augpipe_last_error(void);
AUGPIPE_API void augpipe_string_free(char* s);

/* ---- Feature matrices ------------------------------------------------- */

/* Copies rows * cols row-major values. */
AUGPIPE_API augpipe_status augpipe_features_create(size_t rows, size_t cols,
                                                   const float* values,
                                                   augpipe_features** out);
AUGPIPE_API augpipe_status augpipe_features_read(const char* path,
                                                 augpipe_features** out);
AUGPIPE_API augpipe_status augpipe_features_write(const augpipe_features* f,
                                                  const char* path);
/* Log-mel features of a 16-bit mono PCM buffer using the config's [mel]
 * settings (defaults when cfg is NULL). */
AUGPIPE_API augpipe_status augpipe_features_from_pcm(const int16_t* samples,
                                                     size_t count,
                                                     uint32_t sample_rate,
                                                     const augpipe_config* cfg,
                                                     augpipe_features** out);
AUGPIPE_API size_t augpipe_features_rows(const augpipe_features* f);
AUGPIPE_API size_t augpipe_features_cols(const augpipe_features* f);
/* Copies the values into dst, which must hold rows * cols floats. */
AUGPIPE_API augpipe_status augpipe_features_copy(const augpipe_features* f,
                                                 float* dst, size_t capacity);
/* Grayscale PGM: x is the frame, channel 0 is the bottom row, min-max
 * scaled to 0..255. */
AUGPIPE_API augpipe_status augpipe_features_render_pgm(const augpipe_features* f,
                                                       const char* path);
AUGPIPE_API void augpipe_features_free(augpipe_features* f);

/* ---- Input augmentation ----------------------------------------------- */

typedef struct augpipe_augment_params {
  int stretch_enabled;
  uint64_t stretch_window; /* frames; 0 means a single infinite window */
  double stretch_low;
  double stretch_high;
  int mask_enabled;
  uint64_t mask_repeats;
  uint64_t mask_f_max;
  uint64_t mask_t_max;
  double mask_value;
} augpipe_augment_params;

/* Stretch on (infinite window, [0.8, 1.25]); masking off with repeats 1,
 * f_max 0, t_max 0, value 0. */
AUGPIPE_API void augpipe_augment_params_init(augpipe_augment_params* p);

/* Stretch then mask with every draw taken in order from one generator seeded
 * with `seed`. `draws` may be NULL. */
AUGPIPE_API augpipe_status augpipe_augment(const augpipe_features* in,
                                           const augpipe_augment_params* params,
                                           uint64_t seed, augpipe_features** out,
                                           augpipe_draws** draws);

typedef enum augpipe_mask_axis {
  AUGPIPE_MASK_FREQUENCY = 0,
  AUGPIPE_MASK_TIME = 1
} augpipe_mask_axis;

typedef struct augpipe_mask_rect {
  augpipe_mask_axis axis;
  uint64_t drawn_width; /* as sampled */
  uint64_t start;
  uint64_t width; /* clamped to the axis */
} augpipe_mask_rect;

/* Number of stretch factors drawn (0 when stretching was disabled). */
AUGPIPE_API size_t augpipe_draws_stretch_count(const augpipe_draws* d);
AUGPIPE_API double augpipe_draws_stretch_factor(const augpipe_draws* d, size_t i);
/* Number of output frames and the source frame of each. */
AUGPIPE_API size_t augpipe_draws_index_count(const augpipe_draws* d);
AUGPIPE_API uint64_t augpipe_draws_index(const augpipe_draws* d, size_t i);
AUGPIPE_API size_t augpipe_draws_mask_count(const augpipe_draws* d);
AUGPIPE_API augpipe_status augpipe_draws_mask(const augpipe_draws* d, size_t i,
                                              augpipe_mask_rect* out);
AUGPIPE_API void augpipe_draws_free(augpipe_draws* d);

/* ---- Pipeline configuration ------------------------------------------- */

/* Loads an INI config file. `path` and `preset` may each be NULL; with no
 * path the preset is read as if from an empty file, so presets that mask
 * fail until mask widths are supplied by a file. Both NULL gives a config
 * with every augmentation off. A non-NULL preset replaces the file's preset
 * key. AUGPIPE_SEED, when set, overrides the seed. */
AUGPIPE_API augpipe_status augpipe_config_load(const char* path, const char* preset,
                                               augpipe_config** out);
AUGPIPE_API void augpipe_config_set_seed(augpipe_config* cfg, uint64_t seed);
AUGPIPE_API augpipe_status augpipe_config_set_workers(augpipe_config* cfg,
                                                      size_t workers);
AUGPIPE_API void augpipe_config_set_epoch(augpipe_config* cfg, uint64_t epoch);
AUGPIPE_API uint64_t augpipe_config_seed(const augpipe_config* cfg);
AUGPIPE_API void augpipe_config_free(augpipe_config* cfg);

/* ---- Corpus operations ------------------------------------------------ */

/* Extracts features for every manifest entry into out_dir: one
 * "<id>.fmb" file per utterance (characters outside [A-Za-z0-9._-] become
 * '_'), "stats.json" with per-conversation statistics and "manifest.jsonl"
 * pointing at the feature files. Nothing is written unless every utterance
 * succeeds; the error names each failing utterance. */
AUGPIPE_API augpipe_status augpipe_extract(const augpipe_config* cfg,
                                           const char* manifest,
                                           const char* out_dir);

typedef enum augpipe_subseq_mode {
  AUGPIPE_SUBSEQ_DYNAMIC = 0,
  AUGPIPE_SUBSEQ_STATIC = 1
} augpipe_subseq_mode;

/* Static mode writes an expanded manifest to out_path. Dynamic mode writes
 * one JSON line per utterance describing the draw for the config's epoch.
 * `alignments`, when non-NULL, is used for entries without their own
 * alignment file. Entries left without any alignment are listed in the
 * error. */
AUGPIPE_API augpipe_status augpipe_subseq(const augpipe_config* cfg,
                                          const char* manifest,
                                          const char* alignments,
                                          augpipe_subseq_mode mode, double alpha,
                                          const char* out_path);

/* Runs one epoch and writes the ABB1 batch file to out_path. `summary`, when
 * non-NULL, receives a JSON run summary. */
AUGPIPE_API augpipe_status augpipe_run(const augpipe_config* cfg,
                                       const char* manifest, const char* out_path,
                                       char** summary);

/* Times the per-utterance stages for about `seconds` seconds and returns a
 * JSON report. */
AUGPIPE_API augpipe_status augpipe_bench(const augpipe_config* cfg,
                                         const char* manifest, double seconds,
                                         char** report);

/* Learning rate at `step` for a warmup-then-decay schedule. Returns a
 * negative value and sets the last error on invalid arguments. */
AUGPIPE_API double augpipe_lr_schedule(uint64_t step, double lr_peak,
                                       uint64_t warmup_steps, uint64_t decay_steps,
                                       double decay_factor, uint64_t total_steps);

#ifdef __cplusplus
}
#endif

#endif /* AUGPIPE_AUGPIPE_H_ */

/* Copyright 2026 the bgmrf authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Public C interface of the bgmrf shared library.
 *
 * The library estimates a clean background image from a cluttered video
 * sequence (spatial-continuity labeling over block candidates), trains a
 * per-block-location Gaussian background model from it, and segments frames
 * into binary foreground masks through a three-classifier cascade.
 *
 * All functions returning int yield BGMRF_OK (0) on success; on failure they
 * return an error code and bgmrf_last_error() describes the problem for the
 * calling thread. Handles are opaque; every *_create / *_read / *_load call
 * pairs with the matching *_destroy.
 */

#ifndef BGMRF_H
#define BGMRF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define BGMRF_OK 0
#define BGMRF_ERR_USAGE 1    /* invalid arguments or parameter values */
#define BGMRF_ERR_DATA 2     /* missing/undecodable/inconsistent input data */
#define BGMRF_ERR_INTERNAL 3 /* unexpected failure */

typedef struct bgmrf_config bgmrf_config;
typedef struct bgmrf_frame bgmrf_frame;
typedef struct bgmrf_sequence bgmrf_sequence;
typedef struct bgmrf_model bgmrf_model;
typedef struct bgmrf_segmenter bgmrf_segmenter;

const char* bgmrf_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* bgmrf_last_error(void);

/* --- configuration -------------------------------------------------------- */

bgmrf_config* bgmrf_config_create(void);
void bgmrf_config_destroy(bgmrf_config* cfg);

/* Apply a key=value file; later bgmrf_config_set calls override it. */
int bgmrf_config_load_file(bgmrf_config* cfg, const char* path);
int bgmrf_config_set(bgmrf_config* cfg, const char* key, const char* value);

/* Write the resolved key=value parameter set into buf (NUL-terminated).
 * *needed receives the full length including the terminator. */
int bgmrf_config_format(const bgmrf_config* cfg, char* buf, size_t cap, size_t* needed);

/* Fetch one resolved value as text (same truncation contract as above). */
int bgmrf_config_get(const bgmrf_config* cfg, const char* key, char* buf, size_t cap,
                     size_t* needed);

/* --- frames and sequences -------------------------------------------------- */

/* data is row-major, channel-interleaved, 8-bit; channels is 1 or 3. */
int bgmrf_frame_create(int width, int height, int channels, const unsigned char* data,
                       bgmrf_frame** out);
void bgmrf_frame_destroy(bgmrf_frame* frame);
int bgmrf_frame_width(const bgmrf_frame* frame);
int bgmrf_frame_height(const bgmrf_frame* frame);
int bgmrf_frame_channels(const bgmrf_frame* frame);
const unsigned char* bgmrf_frame_data(const bgmrf_frame* frame);

/* PGM (P5), PPM (P6) or 8-bit gray/RGB PNG, selected by file extension. */
int bgmrf_frame_read(const char* path, bgmrf_frame** out);
int bgmrf_frame_write(const bgmrf_frame* frame, const char* path);

/* Frames matching `pattern` (glob; NULL/empty = any supported extension) in
 * lexicographic filename order. max_frames > 0 caps the count. */
int bgmrf_sequence_read(const char* dir, const char* pattern, int max_frames,
                        bgmrf_sequence** out);
void bgmrf_sequence_destroy(bgmrf_sequence* seq);
int bgmrf_sequence_count(const bgmrf_sequence* seq);
int bgmrf_sequence_dims(const bgmrf_sequence* seq, int* width, int* height, int* channels);
int bgmrf_sequence_get_frame(const bgmrf_sequence* seq, int index, bgmrf_frame** out);

/* --- background estimation and model training ------------------------------ */

/* Clean-background reconstruction over the training sequence. The output
 * image is cropped to whole blocks. */
int bgmrf_estimate_background(const bgmrf_sequence* seq, const bgmrf_config* cfg,
                              bgmrf_frame** out);

/* Gaussian background model; use_mrf != 0 re-centres the per-location means
 * on the estimated background. */
int bgmrf_train(const bgmrf_sequence* seq, const bgmrf_config* cfg, int use_mrf,
                bgmrf_model** out);
int bgmrf_model_save(const bgmrf_model* model, const char* path);
int bgmrf_model_load(const char* path, bgmrf_model** out);
void bgmrf_model_destroy(bgmrf_model* model);

/* --- per-frame segmentation ------------------------------------------------ */

/* The segmenter carries per-frame state (previous descriptors/decisions) and,
 * when the config enables reinit, retrains its model after a sustained
 * full-scene foreground burst. */
int bgmrf_segmenter_create(const bgmrf_model* model, const bgmrf_config* cfg,
                           bgmrf_segmenter** out);
int bgmrf_segmenter_apply(bgmrf_segmenter* seg, const bgmrf_frame* frame, bgmrf_frame** out_mask);
double bgmrf_segmenter_last_fraction(const bgmrf_segmenter* seg);
void bgmrf_segmenter_destroy(bgmrf_segmenter* seg);

/* --- synthetic scenes and scoring ------------------------------------------ */

/* Render a scene spec file into out_dir (frames/, masks/, gt_background.*).
 * seed_override (decimal string) replaces the spec's seed when non-NULL. */
int bgmrf_synth_generate(const char* spec_path, const char* out_dir, const char* seed_override);

/* Score mask directories pairwise by sorted filename; optional CSV output. */
int bgmrf_eval_masks(const char* pred_dir, const char* gt_dir, const char* csv_path,
                     double* mean_precision, double* mean_recall, double* mean_f);

/* Absolute-difference scores between an estimated and a reference image. */
int bgmrf_eval_background(const char* est_path, const char* gt_path, double* mad,
                          double* max_err, unsigned long long* mismatched_pixels);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BGMRF_H */

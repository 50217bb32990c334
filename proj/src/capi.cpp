// Copyright 2026 the bgmrf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bgmrf/bgmrf.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/imagio.hpp"
#include "core/mrf.hpp"
#include "core/segmod.hpp"
#include "core/synth.hpp"

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

int code_of(const bgmrf::Error& e) {
    return e.code() == bgmrf::ErrorCode::usage ? BGMRF_ERR_USAGE : BGMRF_ERR_DATA;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return BGMRF_OK;
    } catch (const bgmrf::Error& e) {
        return set_error(code_of(e), e.what());
    } catch (const std::exception& e) {
        return set_error(BGMRF_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(BGMRF_ERR_INTERNAL, "unknown error");
    }
}

int usage_error(const char* msg) { return set_error(BGMRF_ERR_USAGE, msg); }

// Writes the estimated background image (and snapshots, when configured)
// from a sequence using the config's parameters.
bgmrf::Frame run_estimate(const bgmrf::FrameSequence& seq, const bgmrf::Config& cfg) {
    cfg.finalize();
    bgmrf::IcmSnapshotFn snapshot;
    if (!cfg.snapshot_dir.empty()) {
        const std::filesystem::path dir = cfg.snapshot_dir;
        std::filesystem::create_directories(dir);
        snapshot = [dir](int stage, const bgmrf::Background& bg) {
            bgmrf::Frame partial(bg.grid_width() * bg.block_size(),
                                 bg.grid_height() * bg.block_size(), bg.channels(), 128);
            for (int j = 0; j < bg.grid_height(); ++j)
                for (int i = 0; i < bg.grid_width(); ++i) {
                    if (!bg.assigned(i, j)) continue;
                    const bgmrf::Label& label = bg.at(i, j).label;
                    const int n = bg.block_size();
                    for (int c = 0; c < bg.channels(); ++c)
                        for (int y = 0; y < n; ++y)
                            for (int x = 0; x < n; ++x)
                                partial.at(i * n + x, j * n + y, c) = std::uint8_t(
                                    std::clamp(std::lround(label.values[size_t(c) * n * n +
                                                                        size_t(y) * n + x]),
                                               0L, 255L));
                }
            char name[32];
            std::snprintf(name, sizeof(name), "stage_%03d.png", stage);
            bgmrf::write_image(partial, dir / name, bgmrf::ImageFormat::png);
        };
    }
    return bgmrf::estimate_background(seq, cfg.block_size, cfg.mrf_params(), nullptr, snapshot);
}

bgmrf::BackgroundModel run_train(const bgmrf::FrameSequence& seq, const bgmrf::Config& cfg,
                                 bool use_mrf) {
    cfg.finalize();
    bgmrf::BackgroundModel model = bgmrf::train_model(seq, cfg.seg_params());
    if (use_mrf) {
        const bgmrf::Frame bg = run_estimate(seq, cfg);
        bgmrf::apply_mrf_means(model, bg);
    }
    return model;
}

} // namespace

struct bgmrf_config {
    bgmrf::Config impl;
};

struct bgmrf_frame {
    bgmrf::Frame impl;
};

struct bgmrf_sequence {
    bgmrf::FrameSequence impl;
};

struct bgmrf_model {
    bgmrf::BackgroundModel impl;
};

struct bgmrf_segmenter {
    bgmrf::BackgroundModel model;
    bgmrf::Config cfg;
    bgmrf::SegState state;
    std::vector<double> fractions;
    double last_fraction = 0.0;
    bool reinit_enabled = false;
    bool buffering = false;
    bgmrf::FrameSequence buffer;
};

extern "C" {

const char* bgmrf_version(void) { return "0.1.0"; }

const char* bgmrf_last_error(void) { return g_last_error.c_str(); }

bgmrf_config* bgmrf_config_create(void) { return new (std::nothrow) bgmrf_config; }

void bgmrf_config_destroy(bgmrf_config* cfg) { delete cfg; }

int bgmrf_config_load_file(bgmrf_config* cfg, const char* path) {
    if (!cfg || !path) return usage_error("null argument");
    return guarded([&] { cfg->impl.load_file(path); });
}

int bgmrf_config_set(bgmrf_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return usage_error("null argument");
    return guarded([&] { cfg->impl.set(key, value); });
}

int bgmrf_config_format(const bgmrf_config* cfg, char* buf, size_t cap, size_t* needed) {
    if (!cfg) return usage_error("null argument");
    return guarded([&] {
        const std::string text = cfg->impl.echo();
        if (needed) *needed = text.size() + 1;
        if (buf && cap > 0) {
            const size_t n = std::min(cap - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
    });
}

int bgmrf_config_get(const bgmrf_config* cfg, const char* key, char* buf, size_t cap,
                     size_t* needed) {
    if (!cfg || !key) return usage_error("null argument");
    return guarded([&] {
        const std::string text = cfg->impl.get(key);
        if (needed) *needed = text.size() + 1;
        if (buf && cap > 0) {
            const size_t n = std::min(cap - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
    });
}

int bgmrf_frame_create(int width, int height, int channels, const unsigned char* data,
                       bgmrf_frame** out) {
    if (!out || !data) return usage_error("null argument");
    if (width < 1 || height < 1 || (channels != 1 && channels != 3))
        return usage_error("bad frame geometry");
    return guarded([&] {
        auto* frame = new bgmrf_frame;
        frame->impl = bgmrf::Frame(width, height, channels);
        std::memcpy(frame->impl.data.data(), data, frame->impl.data.size());
        *out = frame;
    });
}

void bgmrf_frame_destroy(bgmrf_frame* frame) { delete frame; }

int bgmrf_frame_width(const bgmrf_frame* frame) { return frame ? frame->impl.width : 0; }
int bgmrf_frame_height(const bgmrf_frame* frame) { return frame ? frame->impl.height : 0; }
int bgmrf_frame_channels(const bgmrf_frame* frame) { return frame ? frame->impl.channels : 0; }

const unsigned char* bgmrf_frame_data(const bgmrf_frame* frame) {
    return frame ? frame->impl.data.data() : nullptr;
}

int bgmrf_frame_read(const char* path, bgmrf_frame** out) {
    if (!path || !out) return usage_error("null argument");
    return guarded([&] {
        auto* frame = new bgmrf_frame;
        try {
            frame->impl = bgmrf::read_image(path);
        } catch (...) {
            delete frame;
            throw;
        }
        *out = frame;
    });
}

int bgmrf_frame_write(const bgmrf_frame* frame, const char* path) {
    if (!frame || !path) return usage_error("null argument");
    return guarded([&] { bgmrf::write_image(frame->impl, path); });
}

int bgmrf_sequence_read(const char* dir, const char* pattern, int max_frames,
                        bgmrf_sequence** out) {
    if (!dir || !out) return usage_error("null argument");
    return guarded([&] {
        auto* seq = new bgmrf_sequence;
        try {
            seq->impl = bgmrf::read_sequence(dir, pattern ? pattern : "", max_frames);
        } catch (...) {
            delete seq;
            throw;
        }
        *out = seq;
    });
}

void bgmrf_sequence_destroy(bgmrf_sequence* seq) { delete seq; }

int bgmrf_sequence_count(const bgmrf_sequence* seq) { return seq ? seq->impl.count() : 0; }

int bgmrf_sequence_dims(const bgmrf_sequence* seq, int* width, int* height, int* channels) {
    if (!seq) return usage_error("null argument");
    if (width) *width = seq->impl.width();
    if (height) *height = seq->impl.height();
    if (channels) *channels = seq->impl.channels();
    return BGMRF_OK;
}

int bgmrf_sequence_get_frame(const bgmrf_sequence* seq, int index, bgmrf_frame** out) {
    if (!seq || !out) return usage_error("null argument");
    if (index < 0 || index >= seq->impl.count()) return usage_error("frame index out of range");
    return guarded([&] { *out = new bgmrf_frame{seq->impl.frames[size_t(index)]}; });
}

int bgmrf_estimate_background(const bgmrf_sequence* seq, const bgmrf_config* cfg,
                              bgmrf_frame** out) {
    if (!seq || !cfg || !out) return usage_error("null argument");
    return guarded([&] { *out = new bgmrf_frame{run_estimate(seq->impl, cfg->impl)}; });
}

int bgmrf_train(const bgmrf_sequence* seq, const bgmrf_config* cfg, int use_mrf,
                bgmrf_model** out) {
    if (!seq || !cfg || !out) return usage_error("null argument");
    return guarded([&] { *out = new bgmrf_model{run_train(seq->impl, cfg->impl, use_mrf != 0)}; });
}

int bgmrf_model_save(const bgmrf_model* model, const char* path) {
    if (!model || !path) return usage_error("null argument");
    return guarded([&] { bgmrf::save_model(model->impl, path); });
}

int bgmrf_model_load(const char* path, bgmrf_model** out) {
    if (!path || !out) return usage_error("null argument");
    return guarded([&] { *out = new bgmrf_model{bgmrf::load_model(path)}; });
}

void bgmrf_model_destroy(bgmrf_model* model) { delete model; }

int bgmrf_segmenter_create(const bgmrf_model* model, const bgmrf_config* cfg,
                           bgmrf_segmenter** out) {
    if (!model || !out) return usage_error("null argument");
    return guarded([&] {
        auto* seg = new bgmrf_segmenter;
        seg->model = model->impl;
        if (cfg) {
            seg->cfg = cfg->impl;
            seg->reinit_enabled = cfg->impl.reinit;
        }
        *out = seg;
    });
}

int bgmrf_segmenter_apply(bgmrf_segmenter* seg, const bgmrf_frame* frame,
                          bgmrf_frame** out_mask) {
    if (!seg || !frame || !out_mask) return usage_error("null argument");
    return guarded([&] {
        bgmrf::SegmentResult result = bgmrf::segment(seg->model, frame->impl, seg->state);
        seg->state = std::move(result.state);
        seg->last_fraction = bgmrf::foreground_fraction(result.mask);
        seg->fractions.push_back(seg->last_fraction);

        if (seg->reinit_enabled) {
            if (!seg->buffering &&
                bgmrf::check_reinit(seg->fractions, seg->cfg.reinit_fraction,
                                    seg->cfg.reinit_consecutive)) {
                seg->buffering = true;
                seg->buffer.frames.clear();
            }
            if (seg->buffering) {
                bgmrf::Frame copy = frame->impl;
                copy.index = int(seg->buffer.frames.size()) + 1;
                seg->buffer.frames.push_back(std::move(copy));
                const int need = seg->cfg.frames > 0 ? seg->cfg.frames : 200;
                if (int(seg->buffer.frames.size()) >= need) {
                    seg->model = run_train(seg->buffer, seg->cfg, true);
                    seg->state = bgmrf::SegState{};
                    seg->fractions.clear();
                    seg->buffering = false;
                    seg->buffer.frames.clear();
                }
            }
        }
        *out_mask = new bgmrf_frame{std::move(result.mask)};
    });
}

double bgmrf_segmenter_last_fraction(const bgmrf_segmenter* seg) {
    return seg ? seg->last_fraction : 0.0;
}

void bgmrf_segmenter_destroy(bgmrf_segmenter* seg) { delete seg; }

int bgmrf_synth_generate(const char* spec_path, const char* out_dir, const char* seed_override) {
    if (!spec_path || !out_dir) return usage_error("null argument");
    return guarded([&] {
        bgmrf::SceneSpec spec = bgmrf::parse_scene_spec(spec_path);
        if (seed_override) spec.seed = std::strtoull(seed_override, nullptr, 10);
        bgmrf::generate_to_dir(spec, out_dir);
    });
}

int bgmrf_eval_masks(const char* pred_dir, const char* gt_dir, const char* csv_path,
                     double* mean_precision, double* mean_recall, double* mean_f) {
    if (!pred_dir || !gt_dir) return usage_error("null argument");
    return guarded([&] {
        const bgmrf::DirectoryMaskScores scores = bgmrf::evaluate_mask_dirs(
            pred_dir, gt_dir, csv_path ? std::filesystem::path(csv_path) : std::filesystem::path());
        if (mean_precision) *mean_precision = scores.mean_precision;
        if (mean_recall) *mean_recall = scores.mean_recall;
        if (mean_f) *mean_f = scores.mean_f;
    });
}

int bgmrf_eval_background(const char* est_path, const char* gt_path, double* mad,
                          double* max_err, unsigned long long* mismatched_pixels) {
    if (!est_path || !gt_path) return usage_error("null argument");
    return guarded([&] {
        const bgmrf::BgScore score =
            bgmrf::background_error(bgmrf::read_image(est_path), bgmrf::read_image(gt_path));
        if (mad) *mad = score.mad;
        if (max_err) *max_err = score.max_err;
        if (mismatched_pixels) *mismatched_pixels = (unsigned long long)(score.mismatched_pixels);
    });
}

} // extern "C"

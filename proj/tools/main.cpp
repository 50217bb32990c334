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

// Batch driver over the bgmrf C API. Subcommands: estimate-bg, train,
// segment, synth, eval. Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bgmrf/bgmrf.h"

namespace {

struct ConfigDeleter {
    void operator()(bgmrf_config* p) const { bgmrf_config_destroy(p); }
};
struct FrameDeleter {
    void operator()(bgmrf_frame* p) const { bgmrf_frame_destroy(p); }
};
struct SequenceDeleter {
    void operator()(bgmrf_sequence* p) const { bgmrf_sequence_destroy(p); }
};
struct ModelDeleter {
    void operator()(bgmrf_model* p) const { bgmrf_model_destroy(p); }
};
struct SegmenterDeleter {
    void operator()(bgmrf_segmenter* p) const { bgmrf_segmenter_destroy(p); }
};

using ConfigPtr = std::unique_ptr<bgmrf_config, ConfigDeleter>;
using FramePtr = std::unique_ptr<bgmrf_frame, FrameDeleter>;
using SequencePtr = std::unique_ptr<bgmrf_sequence, SequenceDeleter>;
using ModelPtr = std::unique_ptr<bgmrf_model, ModelDeleter>;
using SegmenterPtr = std::unique_ptr<bgmrf_segmenter, SegmenterDeleter>;

// Carries the mapped exit code of a failing C API call.
struct CliError {
    int exit_code;
    std::string message;
};

void check(int rc) {
    if (rc == BGMRF_OK) return;
    throw CliError{rc == BGMRF_ERR_USAGE ? 1 : 2, bgmrf_last_error()};
}

// Flags shared by the pipeline subcommands. Flags override the config file;
// the config file overrides built-in defaults.
struct CommonOpts {
    std::string config_file;
    std::string block_size, step, frames, seed, pattern;
    std::vector<std::string> sets;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "key=value config file");
        cmd->add_option("--block-size", block_size, "Block side in pixels");
        cmd->add_option("--step", step, "Overlap step in pixels");
        cmd->add_option("--frames", frames, "Training-frame cap (0 = all)");
        cmd->add_option("--seed", seed, "Random seed");
        cmd->add_option("--pattern", pattern, "Filename glob for input frames");
        cmd->add_option("--set", sets, "Extra key=value parameter (repeatable)");
    }

    ConfigPtr make_config() const {
        ConfigPtr cfg(bgmrf_config_create());
        if (!cfg) throw CliError{2, "out of memory"};
        if (!config_file.empty()) check(bgmrf_config_load_file(cfg.get(), config_file.c_str()));
        for (const std::string& kv : sets) {
            const size_t eq = kv.find('=');
            if (eq == std::string::npos) throw CliError{1, "--set expects key=value"};
            check(bgmrf_config_set(cfg.get(), kv.substr(0, eq).c_str(),
                                   kv.substr(eq + 1).c_str()));
        }
        auto apply = [&](const char* key, const std::string& value) {
            if (!value.empty()) check(bgmrf_config_set(cfg.get(), key, value.c_str()));
        };
        apply("block_size", block_size);
        apply("step", step);
        apply("frames", frames);
        apply("seed", seed);
        apply("pattern", pattern);
        return cfg;
    }
};

std::string config_get(const bgmrf_config* cfg, const char* key) {
    size_t needed = 0;
    check(bgmrf_config_get(cfg, key, nullptr, 0, &needed));
    std::string value(needed, '\0');
    check(bgmrf_config_get(cfg, key, value.data(), value.size(), &needed));
    value.resize(needed > 0 ? needed - 1 : 0);
    return value;
}

void echo_config(const bgmrf_config* cfg) {
    size_t needed = 0;
    check(bgmrf_config_format(cfg, nullptr, 0, &needed));
    std::string text(needed, '\0');
    check(bgmrf_config_format(cfg, text.data(), text.size(), &needed));
    text.resize(needed > 0 ? needed - 1 : 0);
    std::fputs("resolved configuration:\n", stderr);
    std::fputs(text.c_str(), stderr);
}

SequencePtr read_frames(const std::string& dir, const bgmrf_config* cfg, int cap_override = -1) {
    const std::string pattern = config_get(cfg, "pattern");
    const int cap = cap_override >= 0 ? cap_override : std::stoi(config_get(cfg, "frames"));
    bgmrf_sequence* seq = nullptr;
    check(bgmrf_sequence_read(dir.c_str(), pattern.empty() ? nullptr : pattern.c_str(), cap, &seq));
    return SequencePtr(seq);
}

int run_estimate_bg(const CommonOpts& opts, const std::string& in, const std::string& out) {
    ConfigPtr cfg = opts.make_config();
    echo_config(cfg.get());
    SequencePtr seq = read_frames(in, cfg.get());
    bgmrf_frame* bg = nullptr;
    check(bgmrf_estimate_background(seq.get(), cfg.get(), &bg));
    FramePtr holder(bg);
    check(bgmrf_frame_write(bg, out.c_str()));
    std::printf("background written to %s\n", out.c_str());
    return 0;
}

int run_train(const CommonOpts& opts, const std::string& in, const std::string& out,
              bool no_mrf) {
    ConfigPtr cfg = opts.make_config();
    echo_config(cfg.get());
    SequencePtr seq = read_frames(in, cfg.get());
    bgmrf_model* model = nullptr;
    check(bgmrf_train(seq.get(), cfg.get(), no_mrf ? 0 : 1, &model));
    ModelPtr holder(model);
    check(bgmrf_model_save(model, out.c_str()));
    std::printf("model written to %s\n", out.c_str());
    return 0;
}

int run_segment(const CommonOpts& opts, const std::string& in, const std::string& model_path,
                const std::string& out_dir, bool reinit) {
    ConfigPtr cfg = opts.make_config();
    if (reinit) check(bgmrf_config_set(cfg.get(), "reinit", "1"));
    echo_config(cfg.get());

    bgmrf_model* model = nullptr;
    check(bgmrf_model_load(model_path.c_str(), &model));
    ModelPtr model_holder(model);

    // --frames caps the segmented frames; without it every frame is consumed
    // (the config-file `frames` key applies to training).
    const int cap = opts.frames.empty() ? 0 : std::stoi(opts.frames);
    SequencePtr seq = read_frames(in, cfg.get(), cap);

    bgmrf_segmenter* seg = nullptr;
    check(bgmrf_segmenter_create(model, cfg.get(), &seg));
    SegmenterPtr seg_holder(seg);

    std::filesystem::create_directories(out_dir);
    const int count = bgmrf_sequence_count(seq.get());
    for (int f = 0; f < count; ++f) {
        bgmrf_frame* frame = nullptr;
        check(bgmrf_sequence_get_frame(seq.get(), f, &frame));
        FramePtr frame_holder(frame);
        bgmrf_frame* mask = nullptr;
        check(bgmrf_segmenter_apply(seg, frame, &mask));
        FramePtr mask_holder(mask);
        char name[32];
        std::snprintf(name, sizeof(name), "mask_%06d.pgm", f + 1);
        check(bgmrf_frame_write(mask, (std::filesystem::path(out_dir) / name).string().c_str()));
    }
    std::printf("%d masks written to %s\n", count, out_dir.c_str());
    return 0;
}

int run_synth(const CommonOpts& opts, const std::string& in, const std::string& out) {
    check(bgmrf_synth_generate(in.c_str(), out.c_str(),
                               opts.seed.empty() ? nullptr : opts.seed.c_str()));
    std::printf("scene written to %s\n", out.c_str());
    return 0;
}

int run_eval(const std::string& pred, const std::string& gt, const std::string& mode,
             const std::string& csv) {
    const bool dirs = std::filesystem::is_directory(pred);
    const std::string effective = mode == "auto" ? (dirs ? "masks" : "bg") : mode;
    if (effective == "masks") {
        double precision = 0, recall = 0, f = 0;
        check(bgmrf_eval_masks(pred.c_str(), gt.c_str(), csv.empty() ? nullptr : csv.c_str(),
                               &precision, &recall, &f));
        std::printf("mean_precision=%.6f\nmean_recall=%.6f\nmean_f_measure=%.6f\n", precision,
                    recall, f);
    } else {
        double mad = 0, max_err = 0;
        unsigned long long mismatched = 0;
        check(bgmrf_eval_background(pred.c_str(), gt.c_str(), &mad, &max_err, &mismatched));
        std::printf("mad=%.6f\nmax_err=%.6f\nmismatched_pixels=%llu\n", mad, max_err, mismatched);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Background estimation and foreground segmentation for cluttered sequences"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string in, out, model_path, pred, gt, csv;
    std::string eval_mode = "auto";
    bool no_mrf = false, reinit = false;

    auto* estimate = app.add_subcommand("estimate-bg", "Estimate a clean background image");
    estimate->add_option("--in", in, "Directory of input frames")->required();
    estimate->add_option("--out", out, "Output image path (.pgm/.ppm/.png)")->required();
    opts.attach(estimate);

    auto* train = app.add_subcommand("train", "Train a background model file");
    train->add_option("--in", in, "Directory of input frames")->required();
    train->add_option("--out", out, "Output model path (.bgm)")->required();
    train->add_flag("--no-mrf", no_mrf, "Skip the background-estimation mean replacement");
    opts.attach(train);

    auto* segment = app.add_subcommand("segment", "Write one foreground mask per frame");
    segment->add_option("--in", in, "Directory of input frames")->required();
    segment->add_option("--model", model_path, "Model file from train")->required();
    segment->add_option("--out", out, "Output mask directory")->required();
    segment->add_flag("--reinit", reinit, "Retrain after sustained full-scene foreground");
    opts.attach(segment);

    auto* synth = app.add_subcommand("synth", "Render a synthetic scene spec");
    synth->add_option("--in", in, "Scene spec file")->required();
    synth->add_option("--out", out, "Output directory")->required();
    opts.attach(synth);

    auto* eval = app.add_subcommand("eval", "Score masks or background images");
    eval->add_option("--pred", pred, "Predicted mask directory or image")->required();
    eval->add_option("--gt", gt, "Ground-truth mask directory or image")->required();
    eval->add_option("--mode", eval_mode, "masks|bg|auto")
        ->check(CLI::IsMember({"masks", "bg", "auto"}));
    eval->add_option("--csv", csv, "Per-frame CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (estimate->parsed()) return run_estimate_bg(opts, in, out);
        if (train->parsed()) return run_train(opts, in, out, no_mrf);
        if (segment->parsed()) return run_segment(opts, in, model_path, out, reinit);
        if (synth->parsed()) return run_synth(opts, in, out);
        if (eval->parsed()) return run_eval(pred, gt, eval_mode, csv);
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.exit_code;
    }
    return 1;
}

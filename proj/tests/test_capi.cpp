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

// Exercises the shared-library surface exactly as an external C client would:
// opaque handles, status codes, and thread-local error text.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "bgmrf/bgmrf.h"

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("bgmrf_capi_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

const char* kScene =
    "width=64\nheight=64\nchannels=1\nframes=60\nseed=4\nnoise=0\n"
    "background=waves:100,26,32,24,24\n"
    "object=rect=16x16; texture=invert; park=16,16; visible=6-55\n";

std::filesystem::path write_scene(const std::filesystem::path& dir) {
    const auto path = dir / "scene.txt";
    std::ofstream(path) << kScene;
    return path;
}

} // namespace

TEST_CASE("config lifecycle, files, overrides and echo") {
    const auto dir = temp_dir("config");
    std::ofstream(dir / "cfg.txt") << "# comment\nblock_size=8\nt2=4\n";

    bgmrf_config* cfg = bgmrf_config_create();
    REQUIRE(cfg != nullptr);
    CHECK(bgmrf_config_load_file(cfg, (dir / "cfg.txt").string().c_str()) == BGMRF_OK);

    char buf[64];
    size_t needed = 0;
    CHECK(bgmrf_config_get(cfg, "block_size", buf, sizeof buf, &needed) == BGMRF_OK);
    CHECK(std::string(buf) == "8");
    CHECK(bgmrf_config_get(cfg, "step", buf, sizeof buf, &needed) == BGMRF_OK);
    CHECK(std::string(buf) == "4");  // tracks block_size until set explicitly

    CHECK(bgmrf_config_set(cfg, "block_size", "16") == BGMRF_OK);
    CHECK(bgmrf_config_set(cfg, "f_min", "9") == BGMRF_ERR_USAGE);
    CHECK(std::string(bgmrf_last_error()).find("f_min") != std::string::npos);
    CHECK(bgmrf_config_set(cfg, "no_such_key", "1") == BGMRF_ERR_USAGE);

    size_t full = 0;
    CHECK(bgmrf_config_format(cfg, nullptr, 0, &full) == BGMRF_OK);
    std::string echo(full, '\0');
    CHECK(bgmrf_config_format(cfg, echo.data(), echo.size(), &full) == BGMRF_OK);
    CHECK(echo.find("t2=4") != std::string::npos);
    bgmrf_config_destroy(cfg);
}

TEST_CASE("null arguments are usage errors") {
    CHECK(bgmrf_config_set(nullptr, "t1", "0.5") == BGMRF_ERR_USAGE);
    CHECK(bgmrf_frame_read(nullptr, nullptr) == BGMRF_ERR_USAGE);
    CHECK(bgmrf_sequence_read(nullptr, nullptr, 0, nullptr) == BGMRF_ERR_USAGE);
    CHECK(std::strlen(bgmrf_last_error()) > 0);
}

TEST_CASE("missing inputs are data errors") {
    bgmrf_sequence* seq = nullptr;
    CHECK(bgmrf_sequence_read("/no/such/dir", nullptr, 0, &seq) == BGMRF_ERR_DATA);
    bgmrf_model* model = nullptr;
    CHECK(bgmrf_model_load("/no/such/model.bgm", &model) == BGMRF_ERR_DATA);
}

TEST_CASE("frame buffers round-trip through handles and files") {
    const auto dir = temp_dir("frame");
    unsigned char data[6 * 4];
    for (size_t n = 0; n < sizeof data; ++n) data[n] = (unsigned char)(n * 7);

    bgmrf_frame* frame = nullptr;
    REQUIRE(bgmrf_frame_create(6, 4, 1, data, &frame) == BGMRF_OK);
    CHECK(bgmrf_frame_width(frame) == 6);
    CHECK(bgmrf_frame_height(frame) == 4);
    CHECK(bgmrf_frame_channels(frame) == 1);
    CHECK(std::memcmp(bgmrf_frame_data(frame), data, sizeof data) == 0);

    const auto path = (dir / "f.png").string();
    CHECK(bgmrf_frame_write(frame, path.c_str()) == BGMRF_OK);
    bgmrf_frame* back = nullptr;
    REQUIRE(bgmrf_frame_read(path.c_str(), &back) == BGMRF_OK);
    CHECK(std::memcmp(bgmrf_frame_data(back), data, sizeof data) == 0);
    bgmrf_frame_destroy(back);
    bgmrf_frame_destroy(frame);
}

TEST_CASE("a sustained scene change retrains the segmenter when enabled") {
    const auto dir = temp_dir("reinit");
    // Model learned on one texture, frames drawn from a very different one.
    std::ofstream(dir / "train.txt")
        << "width=64\nheight=64\nchannels=1\nframes=30\nseed=2\nnoise=1\n"
           "background=waves:100,26,32,24,24\n";
    std::ofstream(dir / "changed.txt")
        << "width=64\nheight=64\nchannels=1\nframes=40\nseed=6\nnoise=1\n"
           "background=checker:8,40,210\n";
    REQUIRE(bgmrf_synth_generate((dir / "train.txt").string().c_str(),
                                 (dir / "train").string().c_str(), nullptr) == BGMRF_OK);
    REQUIRE(bgmrf_synth_generate((dir / "changed.txt").string().c_str(),
                                 (dir / "changed").string().c_str(), nullptr) == BGMRF_OK);

    bgmrf_config* cfg = bgmrf_config_create();
    REQUIRE(bgmrf_config_set(cfg, "reinit", "1") == BGMRF_OK);
    REQUIRE(bgmrf_config_set(cfg, "frames", "20") == BGMRF_OK);  // retraining budget

    bgmrf_sequence* train_seq = nullptr;
    REQUIRE(bgmrf_sequence_read((dir / "train" / "frames").string().c_str(), nullptr, 0,
                                &train_seq) == BGMRF_OK);
    bgmrf_model* model = nullptr;
    REQUIRE(bgmrf_train(train_seq, cfg, 1, &model) == BGMRF_OK);

    bgmrf_sequence* changed_seq = nullptr;
    REQUIRE(bgmrf_sequence_read((dir / "changed" / "frames").string().c_str(), nullptr, 0,
                                &changed_seq) == BGMRF_OK);

    bgmrf_segmenter* seg = nullptr;
    REQUIRE(bgmrf_segmenter_create(model, cfg, &seg) == BGMRF_OK);
    double first_fraction = -1.0, last_fraction = -1.0;
    for (int f = 0; f < bgmrf_sequence_count(changed_seq); ++f) {
        bgmrf_frame* frame = nullptr;
        REQUIRE(bgmrf_sequence_get_frame(changed_seq, f, &frame) == BGMRF_OK);
        bgmrf_frame* mask = nullptr;
        REQUIRE(bgmrf_segmenter_apply(seg, frame, &mask) == BGMRF_OK);
        if (f == 0) first_fraction = bgmrf_segmenter_last_fraction(seg);
        last_fraction = bgmrf_segmenter_last_fraction(seg);
        bgmrf_frame_destroy(mask);
        bgmrf_frame_destroy(frame);
    }
    // The stale model floods foreground; after the retraining budget the
    // rebuilt model accepts the new scene again.
    CHECK(first_fraction > 0.7);
    CHECK(last_fraction < 0.1);

    bgmrf_segmenter_destroy(seg);
    bgmrf_model_destroy(model);
    bgmrf_sequence_destroy(changed_seq);
    bgmrf_sequence_destroy(train_seq);
    bgmrf_config_destroy(cfg);
}

TEST_CASE("full pipeline through the shared library") {
    const auto dir = temp_dir("pipeline");
    const auto scene = write_scene(dir);
    REQUIRE(bgmrf_synth_generate(scene.string().c_str(), (dir / "out").string().c_str(),
                                 nullptr) == BGMRF_OK);

    bgmrf_sequence* seq = nullptr;
    REQUIRE(bgmrf_sequence_read((dir / "out" / "frames").string().c_str(), nullptr, 0, &seq) ==
            BGMRF_OK);
    CHECK(bgmrf_sequence_count(seq) == 60);
    int w = 0, h = 0, ch = 0;
    CHECK(bgmrf_sequence_dims(seq, &w, &h, &ch) == BGMRF_OK);
    CHECK(w == 64);
    CHECK(h == 64);
    CHECK(ch == 1);

    bgmrf_config* cfg = bgmrf_config_create();
    REQUIRE(cfg != nullptr);

    // Clutter-free reconstruction despite the long-parked occluder.
    bgmrf_frame* bg = nullptr;
    REQUIRE(bgmrf_estimate_background(seq, cfg, &bg) == BGMRF_OK);
    const auto bg_path = (dir / "bg.pgm").string();
    CHECK(bgmrf_frame_write(bg, bg_path.c_str()) == BGMRF_OK);
    double mad = -1, max_err = -1;
    unsigned long long mismatched = 99;
    CHECK(bgmrf_eval_background(bg_path.c_str(),
                                (dir / "out" / "gt_background.pgm").string().c_str(), &mad,
                                &max_err, &mismatched) == BGMRF_OK);
    CHECK(mad == 0.0);
    CHECK(mismatched == 0);

    // Train, persist, reload, segment every frame, then score the masks.
    bgmrf_model* model = nullptr;
    REQUIRE(bgmrf_train(seq, cfg, 1, &model) == BGMRF_OK);
    const auto model_path = (dir / "m.bgm").string();
    CHECK(bgmrf_model_save(model, model_path.c_str()) == BGMRF_OK);
    bgmrf_model* loaded = nullptr;
    REQUIRE(bgmrf_model_load(model_path.c_str(), &loaded) == BGMRF_OK);

    bgmrf_segmenter* seg = nullptr;
    REQUIRE(bgmrf_segmenter_create(loaded, cfg, &seg) == BGMRF_OK);
    std::filesystem::create_directories(dir / "masks");
    const int count = bgmrf_sequence_count(seq);
    for (int f = 0; f < count; ++f) {
        bgmrf_frame* frame = nullptr;
        REQUIRE(bgmrf_sequence_get_frame(seq, f, &frame) == BGMRF_OK);
        bgmrf_frame* mask = nullptr;
        REQUIRE(bgmrf_segmenter_apply(seg, frame, &mask) == BGMRF_OK);
        char name[32];
        std::snprintf(name, sizeof name, "mask_%06d.pgm", f + 1);
        CHECK(bgmrf_frame_write(mask, (dir / "masks" / name).string().c_str()) == BGMRF_OK);
        bgmrf_frame_destroy(mask);
        bgmrf_frame_destroy(frame);
    }
    CHECK(bgmrf_segmenter_last_fraction(seg) >= 0.0);

    double precision = 0, recall = 0, f_measure = 0;
    CHECK(bgmrf_eval_masks((dir / "masks").string().c_str(),
                           (dir / "out" / "masks").string().c_str(),
                           (dir / "scores.csv").string().c_str(), &precision, &recall,
                           &f_measure) == BGMRF_OK);
    // The occluder dwells in 50 of 60 frames; the model was cleaned by the
    // estimated background, so it must be detected while present.
    CHECK(recall > 0.8);

    bgmrf_segmenter_destroy(seg);
    bgmrf_model_destroy(loaded);
    bgmrf_model_destroy(model);
    bgmrf_frame_destroy(bg);
    bgmrf_config_destroy(cfg);
    bgmrf_sequence_destroy(seq);
}


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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "core/segmod.hpp"

namespace bgmrf {

/// Procedural texture. All kinds are evaluated in the coordinates they are
/// given; "invert" mirrors the scene background (255 - value).
struct Texture {
    enum class Kind { flat, gradient, checker, waves, invert } kind = Kind::flat;
    double p0 = 128, p1 = 0, p2 = 0, p3 = 0, p4 = 0;

    static Texture parse(const std::string& text);
    double value(double x, double y, int channel, const Texture* background) const;
};

struct ObjectSpec {
    int width = 0, height = 0;
    Texture texture;
    enum class Motion { park, steps, linear } motion = Motion::park;
    int x0 = 0, y0 = 0;          // park/steps/linear start
    int x1 = 0, y1 = 0;          // linear end
    int dx = 0, dy = 0, every = 1;  // steps: hop vector and frame period
    int from = 1, to = 1;        // visibility interval (inclusive, 1-based)

    /// Pixel origin at frame f (valid only when visible).
    std::pair<int, int> position(int f) const;
    bool visible(int f) const { return f >= from && f <= to; }
};

struct SceneSpec {
    int width = 64, height = 64, channels = 1;
    int frames = 200;
    std::uint64_t seed = 1;
    int noise = 0;  // uniform integer amplitude in [-noise, noise]
    Texture background;
    std::vector<ObjectSpec> objects;

    void validate() const;
};

/// Parse the key=value scene file format (one key per line, '#' comments,
/// repeated `object=` lines).
SceneSpec parse_scene_spec_text(const std::string& text);
SceneSpec parse_scene_spec(const std::filesystem::path& path);

struct SynthResult {
    FrameSequence frames;
    Frame gt_background;
    std::vector<Mask> gt_masks;  // exact object pixels per frame
};

/// Deterministic for a fixed spec (including seed).
SynthResult generate(const SceneSpec& spec);

/// Generate and write frames/, masks/ and gt_background to a directory.
void generate_to_dir(const SceneSpec& spec, const std::filesystem::path& out_dir);

} // namespace bgmrf

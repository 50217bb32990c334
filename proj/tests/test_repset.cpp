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

#include <doctest.h>

#include <random>

#include "core/error.hpp"
#include "core/repset.hpp"
#include "core/synth.hpp"
#include "oracles.hpp"

using namespace bgmrf;

namespace {

// Distinct textured contents: pattern index scales a fixed random texture.
Label content(int pattern, unsigned seed = 42) {
    std::mt19937_64 rng(seed);
    std::vector<double> values(64);
    for (double& v : values) v = double(rng() % 100);
    for (double& v : values) v += 40.0 * pattern;
    return oracle::make_label(8, 1, values);
}

} // namespace

TEST_SUITE("repset") {

TEST_CASE("a static stream registers one representative with full weight") {
    CollectorParams p;
    NodeState state;
    for (int f = 0; f < 10; ++f) observe(state, content(0), p);
    REQUIRE(state.rep_count() == 1);
    CHECK(state.reps[0].weight == 10);
}

TEST_CASE("alternating contents never pass the consecutive gate") {
    CollectorParams p;
    p.f_min = 2;
    NodeState state;
    for (int f = 0; f < 12; ++f) observe(state, content(f % 2), p);
    CHECK(state.rep_count() == 0);
}

TEST_CASE("interleaved runs accumulate weights per representative") {
    CollectorParams p;  // f_min = 3
    NodeState state;
    for (int f = 0; f < 3; ++f) observe(state, content(0), p);
    for (int f = 0; f < 3; ++f) observe(state, content(1), p);
    for (int f = 0; f < 4; ++f) observe(state, content(0), p);
    REQUIRE(state.rep_count() == 2);
    CHECK(state.reps[0].weight == 7);
    CHECK(state.reps[1].weight == 3);
}

TEST_CASE("a matching representative clears the pending candidate") {
    CollectorParams p;  // f_min = 3
    NodeState state;
    for (int f = 0; f < 3; ++f) observe(state, content(0), p);
    // Two appearances, interrupted by a registered match, then two more:
    // the gate must restart, so no second representative yet.
    observe(state, content(1), p);
    observe(state, content(1), p);
    observe(state, content(0), p);
    observe(state, content(1), p);
    observe(state, content(1), p);
    CHECK(state.rep_count() == 1);
    observe(state, content(1), p);
    CHECK(state.rep_count() == 2);
}

TEST_CASE("collect over a static sequence yields singletons everywhere") {
    SceneSpec spec;
    spec.width = 32;
    spec.height = 32;
    spec.frames = 20;
    spec.background = Texture::parse("waves:80,20,11,18,7");
    const SynthResult scene = generate(spec);

    const Grid<NodeState> states = collect(scene.frames, 16, CollectorParams{});
    REQUIRE(states.width() == 2);
    REQUIRE(states.height() == 2);
    for (const NodeState& state : states) {
        CHECK(state.rep_count() == 1);
        CHECK(state.reps[0].weight == 20);
    }
}

TEST_CASE("a long-parked occluder forms a second representative") {
    SceneSpec spec;
    spec.width = 64;
    spec.height = 64;
    spec.frames = 200;
    spec.background = Texture::parse("waves:80,20,11,18,7");
    ObjectSpec obj;
    obj.width = 16;
    obj.height = 16;
    obj.texture = Texture::parse("invert");
    obj.x0 = 16;
    obj.y0 = 16;
    obj.from = 1;
    obj.to = 150;
    spec.objects.push_back(obj);
    const SynthResult scene = generate(spec);

    const Grid<NodeState> states = collect(scene.frames, 16, CollectorParams{});
    const NodeState& occluded = states.at(1, 1);
    REQUIRE(occluded.rep_count() == 2);
    CHECK(occluded.reps[0].weight == 150);  // occluder, seen first
    CHECK(occluded.reps[1].weight == 50);   // background, frames 151..200
    for (const NodeState& state : states)
        if (!(state.node == NodeCoord{1, 1})) CHECK(state.rep_count() == 1);
}

TEST_CASE("per-frame flicker below the distance threshold is absorbed") {
    SceneSpec spec;
    spec.width = 32;
    spec.height = 32;
    spec.frames = 30;
    spec.noise = 1;
    spec.background = Texture::parse("waves:80,20,11,18,7");
    const SynthResult scene = generate(spec);

    const Grid<NodeState> states = collect(scene.frames, 16, CollectorParams{});
    for (const NodeState& state : states) {
        CHECK(state.rep_count() == 1);
        CHECK(state.reps[0].weight == 30);
    }
}

TEST_CASE("uniqueness and weight budget hold under random streams") {
    std::mt19937_64 rng(3);
    CollectorParams p;
    p.f_min = 2;
    for (int trial = 0; trial < 20; ++trial) {
        NodeState state;
        const int frames = 30;
        for (int f = 0; f < frames; ++f) observe(state, content(int(rng() % 4)), p);

        long total = 0;
        for (const auto& rep : state.reps) total += rep.weight;
        CHECK(total <= frames);
        for (int a = 0; a < state.rep_count(); ++a)
            for (int b = a + 1; b < state.rep_count(); ++b)
                CHECK_FALSE(similar(state.reps[size_t(a)].label, state.reps[size_t(b)].label,
                                    p.sim));
    }
}

TEST_CASE("representative contact sheet renders to PNG") {
    SceneSpec spec;
    spec.width = 32;
    spec.height = 32;
    spec.frames = 20;
    spec.background = Texture::parse("waves:80,20,11,18,7");
    ObjectSpec obj;
    obj.width = 16;
    obj.height = 16;
    obj.texture = Texture::parse("invert");
    obj.x0 = 0;
    obj.y0 = 0;
    obj.from = 5;
    obj.to = 16;
    spec.objects.push_back(obj);
    const SynthResult scene = generate(spec);

    const Grid<NodeState> states = collect(scene.frames, 16, CollectorParams{});
    const auto path = std::filesystem::temp_directory_path() / "bgmrf_test_repsheet.png";
    std::filesystem::remove(path);
    dump_repset_sheet(states, path);
    const Frame sheet = read_image(path);
    CHECK(sheet.width == 2 * 17 + 1);   // two representatives at the occluded node
    CHECK(sheet.height == 4 * 17 + 1);  // one row per node
}

TEST_CASE("too-short sequences are rejected") {
    SceneSpec spec;
    spec.width = 32;
    spec.height = 32;
    spec.frames = 2;
    spec.background = Texture::parse("waves:80,20,11,18,7");
    const SynthResult scene = generate(spec);
    CHECK_THROWS_WITH_AS(collect(scene.frames, 16, CollectorParams{}),
                         doctest::Contains("sequence too short"), Error);
}

TEST_CASE("collect is deterministic") {
    SceneSpec spec;
    spec.width = 32;
    spec.height = 32;
    spec.frames = 12;
    spec.noise = 2;
    spec.seed = 5;
    spec.background = Texture::parse("waves:80,20,11,18,7");
    const SynthResult scene = generate(spec);

    const Grid<NodeState> a = collect(scene.frames, 16, CollectorParams{});
    const Grid<NodeState> b = collect(scene.frames, 16, CollectorParams{});
    for (int j = 0; j < a.height(); ++j)
        for (int i = 0; i < a.width(); ++i) {
            REQUIRE(a.at(i, j).rep_count() == b.at(i, j).rep_count());
            for (int k = 0; k < a.at(i, j).rep_count(); ++k) {
                CHECK(a.at(i, j).reps[size_t(k)].weight == b.at(i, j).reps[size_t(k)].weight);
                CHECK(a.at(i, j).reps[size_t(k)].label.values ==
                      b.at(i, j).reps[size_t(k)].label.values);
            }
        }
}

} // TEST_SUITE

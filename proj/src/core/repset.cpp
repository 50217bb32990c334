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

#include "core/repset.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace bgmrf {

void observe(NodeState& state, const Label& incoming, const CollectorParams& p) {
    if (!(incoming.node == state.node)) fail_data("label node does not match the state's node");
    for (auto& rep : state.reps) {
        if (similar(incoming, rep.label, p.sim)) {
            rep.weight += 1;
            state.pending.reset();
            return;
        }
    }
    if (state.pending && similar(incoming, state.pending->label, p.sim)) {
        state.pending->consecutive += 1;
        if (state.pending->consecutive >= p.f_min) {
            state.reps.push_back({state.pending->label, long(p.f_min)});
            state.pending.reset();
        }
        return;
    }
    state.pending = NodeState::Pending{incoming, 1};
}

Grid<NodeState> collect(const FrameSequence& seq, int block_size, const CollectorParams& p) {
    if (p.f_min < 2 || p.f_min > 5) fail_usage("f_min must be in [2, 5]");
    if (seq.count() < p.f_min) fail_data("sequence too short");

    Grid<Label> first = partition(seq.frames.front(), block_size);
    Grid<NodeState> states(first.width(), first.height());
    for (int j = 0; j < states.height(); ++j)
        for (int i = 0; i < states.width(); ++i) states.at(i, j).node = {i, j};

    for (const Frame& frame : seq.frames) {
        Grid<Label> labels = partition(frame, block_size);
        for (int j = 0; j < states.height(); ++j)
            for (int i = 0; i < states.width(); ++i)
                observe(states.at(i, j), labels.at(i, j), p);
    }
    return states;
}

void dump_repset_sheet(const Grid<NodeState>& states, const std::filesystem::path& path) {
    int max_reps = 1;
    int block_size = 0;
    int channels = 1;
    for (const NodeState& state : states) {
        max_reps = std::max(max_reps, state.rep_count());
        for (const auto& rep : state.reps) {
            block_size = rep.label.block_size;
            channels = rep.label.channels;
        }
    }
    if (block_size == 0) fail_data("no representatives to dump");

    const int pad = 1;
    const int cell = block_size + pad;
    const int node_count = states.width() * states.height();
    Frame sheet(max_reps * cell + pad, node_count * cell + pad, channels, 32);
    int row = 0;
    for (int j = 0; j < states.height(); ++j) {
        for (int i = 0; i < states.width(); ++i, ++row) {
            const NodeState& state = states.at(i, j);
            for (int k = 0; k < state.rep_count(); ++k) {
                const Label& label = state.reps[size_t(k)].label;
                const int ox = pad + k * cell;
                const int oy = pad + row * cell;
                for (int c = 0; c < channels; ++c)
                    for (int y = 0; y < block_size; ++y)
                        for (int x = 0; x < block_size; ++x) {
                            const double v =
                                label.values[size_t(c) * block_size * block_size +
                                             size_t(y) * block_size + x];
                            sheet.at(ox + x, oy + y, c) =
                                std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
                        }
            }
        }
    }
    write_image(sheet, path, ImageFormat::png);
}

} // namespace bgmrf

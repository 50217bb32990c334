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

#include <filesystem>
#include <optional>

#include "core/similarity.hpp"

namespace bgmrf {

struct CollectorParams {
    int f_min = 3;  // consecutive appearances required before registration (2..5)
    SimilarityParams sim;
};

/// A unique block content observed at a node, with its occurrence count.
struct Representative {
    Label label;     // pixel content of the first registered instance
    long weight = 0; // number of frames deemed the same as this label
};

/// Per-node collection state: registered representatives plus the candidate
/// currently accumulating consecutive appearances.
struct NodeState {
    NodeCoord node;
    std::vector<Representative> reps;  // registration order
    struct Pending {
        Label label;
        int consecutive = 0;
    };
    std::optional<Pending> pending;

    int rep_count() const { return int(reps.size()); }
};

/// Fold one frame's block into the node state. Matching is tested against
/// representatives in registration order; the first match wins. A match to a
/// representative clears the pending candidate; a candidate is promoted once
/// it has been seen f_min consecutive frames.
void observe(NodeState& state, const Label& incoming, const CollectorParams& p);

/// Run observe over every frame for every node of the non-overlapping grid.
Grid<NodeState> collect(const FrameSequence& seq, int block_size, const CollectorParams& p);

/// Debug contact sheet: one row of representative blocks per node, PNG output.
void dump_repset_sheet(const Grid<NodeState>& states, const std::filesystem::path& path);

} // namespace bgmrf

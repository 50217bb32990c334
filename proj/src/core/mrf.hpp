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

#include <functional>
#include <optional>

#include "core/repset.hpp"

namespace bgmrf {

struct MrfParams {
    double temperature = 1024.0;  // moderates the peaks of the smoothness prior
    long w_max = 150;             // occurrence-weight cap for the likelihood
    double eta = 3.0;             // prior weight in the log-posterior
    int max_iters = 20;           // refinement pass cap
    SimilarityParams sim;
    int f_min = 3;
};

/// Partial or complete background labeling over the node grid.
class Background {
public:
    struct Assignment {
        int rep_index = 0;
        Label label;
    };

    Background() = default;
    Background(int grid_w, int grid_h, int block_size, int channels)
        : block_size_(block_size), channels_(channels), cells_(grid_w, grid_h) {}

    int grid_width() const { return cells_.width(); }
    int grid_height() const { return cells_.height(); }
    int block_size() const { return block_size_; }
    int channels() const { return channels_; }

    bool assigned(int i, int j) const { return cells_.at(i, j).has_value(); }
    const Assignment& at(int i, int j) const { return *cells_.at(i, j); }
    void assign(int i, int j, int rep_index, const Label& label) {
        cells_.at(i, j) = Assignment{rep_index, label};
    }
    bool complete() const;

private:
    int block_size_ = 0;
    int channels_ = 1;
    Grid<std::optional<Assignment>> cells_;
};

/// Assign every single-representative node. When no node is unambiguous, the
/// corner node whose strongest representative has the largest weight is
/// seeded with that representative instead.
Background seed_background(const Grid<NodeState>& states);

/// Sum of absolute 2D DCT coefficients of an assembled patch, DC term
/// suppressed, accumulated over channels. Zero iff the patch is constant
/// per channel.
double clique_potential(const std::vector<Matrix>& channel_patches);

/// Energy of placing `candidate` at `node`: the sum of potentials over every
/// 2x2 clique whose other three members are assigned; when no such clique
/// exists, pair cliques with each assigned 4-connected neighbour are used.
/// Errors with "isolated node" when no assigned neighbour exists at all.
double node_energy(const Background& bg, NodeCoord node, const Label& candidate);

/// Occurrence-weight likelihood with cap: min(w_max, W_k) / sum.
std::vector<double> likelihood(const std::vector<long>& weights, long w_max);

/// Gibbs prior over one node's state space: exp(-U/T), normalised.
std::vector<double> prior(const std::vector<double>& energies, double temperature);

/// Weighted log-posterior per candidate: log likelihood + eta * log prior.
/// A single-candidate node scores {0}.
std::vector<double> label_scores(const NodeState& state, const Background& bg, NodeCoord node,
                                 const MrfParams& p);

/// Argmax of label_scores; ties break toward the earliest-registered index.
int select_label(const NodeState& state, const Background& bg, NodeCoord node,
                 const MrfParams& p);

/// Diagnostics of one labeling run.
struct IcmTrace {
    struct Reassignment {
        NodeCoord node;
        int pass = 0;
        int old_index = 0, new_index = 0;
        double old_score = 0.0, new_score = 0.0;
    };
    bool used_corner_seed = false;
    int seed_assignments = 0;
    int fill_assignments = 0;
    std::vector<int> pass_changes;              // label changes per refinement pass
    std::vector<Reassignment> reassignments;
};

/// Called after seeding, after the fill pass, and after every refinement pass.
using IcmSnapshotFn = std::function<void(int stage, const Background&)>;

/// Full labeling: seed, fill most-constrained-first, then iterated
/// conditional modes restricted to nodes whose 8-neighbourhood changed.
Background icm(const Grid<NodeState>& states, const MrfParams& p, IcmTrace* trace = nullptr,
               const IcmSnapshotFn& snapshot = nullptr);

/// Render an assigned background into an image of the cropped dimensions.
Frame assemble_background(const Background& bg);

/// collect + icm + assemble.
Frame estimate_background(const FrameSequence& seq, int block_size, const MrfParams& p,
                          IcmTrace* trace = nullptr, const IcmSnapshotFn& snapshot = nullptr);

} // namespace bgmrf

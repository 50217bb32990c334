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

#include "core/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include "core/error.hpp"

namespace bgmrf {

namespace {

constexpr int kDx[4] = {-1, 1, 0, 0};
constexpr int kDy[4] = {0, 0, -1, 1};

// Writes a label's pixels into per-channel patch matrices at a block offset.
void place_block(std::vector<Matrix>& patches, const Label& label, int row_off, int col_off) {
    const int n = label.block_size;
    for (int c = 0; c < label.channels; ++c) {
        const double* src = label.values.data() + size_t(c) * n * n;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                patches[size_t(c)](row_off + y, col_off + x) = src[size_t(y) * n + x];
    }
}

std::vector<Matrix> make_patches(int channels, int rows, int cols) {
    return std::vector<Matrix>(size_t(channels), Matrix(rows, cols));
}

int raster_index(NodeCoord node, int grid_w) { return node.j * grid_w + node.i; }

} // namespace

bool Background::complete() const {
    for (const auto& cell : cells_)
        if (!cell.has_value()) return false;
    return true;
}

Background seed_background(const Grid<NodeState>& states) {
    for (const NodeState& state : states)
        if (state.rep_count() == 0)
            fail_data("uncovered node (" + std::to_string(state.node.i) + "," +
                      std::to_string(state.node.j) + "): no representative survived collection");

    int block_size = 0, channels = 1;
    for (const NodeState& state : states) {
        block_size = state.reps.front().label.block_size;
        channels = state.reps.front().label.channels;
        break;
    }

    Background bg(states.width(), states.height(), block_size, channels);
    bool any = false;
    for (const NodeState& state : states) {
        if (state.rep_count() == 1) {
            bg.assign(state.node.i, state.node.j, 0, state.reps.front().label);
            any = true;
        }
    }
    if (any) return bg;

    // No unambiguous node anywhere: seed the corner with the heaviest label.
    const int gw = states.width(), gh = states.height();
    const NodeCoord corners[4] = {{0, 0}, {gw - 1, 0}, {0, gh - 1}, {gw - 1, gh - 1}};
    NodeCoord best_corner = corners[0];
    int best_rep = 0;
    long best_weight = -1;
    for (const NodeCoord corner : corners) {
        const NodeState& state = states.at(corner.i, corner.j);
        for (int k = 0; k < state.rep_count(); ++k) {
            if (state.reps[size_t(k)].weight > best_weight) {
                best_weight = state.reps[size_t(k)].weight;
                best_corner = corner;
                best_rep = k;
            }
        }
    }
    bg.assign(best_corner.i, best_corner.j, best_rep,
              states.at(best_corner.i, best_corner.j).reps[size_t(best_rep)].label);
    return bg;
}

double clique_potential(const std::vector<Matrix>& channel_patches) {
    double energy = 0.0;
    for (const Matrix& patch : channel_patches) {
        Matrix coeffs = dct2_rect(patch);
        coeffs(0, 0) = 0.0;
        for (double v : coeffs.data()) energy += std::abs(v);
    }
    return energy;
}

double node_energy(const Background& bg, NodeCoord node, const Label& candidate) {
    const int n = bg.block_size();
    const int gw = bg.grid_width(), gh = bg.grid_height();
    double energy = 0.0;
    int quads = 0;

    // 2x2 cliques containing the node; (qi, qj) is each clique's top-left.
    for (int qj = node.j - 1; qj <= node.j; ++qj) {
        for (int qi = node.i - 1; qi <= node.i; ++qi) {
            if (qi < 0 || qj < 0 || qi + 1 >= gw || qj + 1 >= gh) continue;
            bool others_assigned = true;
            for (int dj = 0; dj < 2 && others_assigned; ++dj)
                for (int di = 0; di < 2; ++di) {
                    const NodeCoord member{qi + di, qj + dj};
                    if (member == node) continue;
                    if (!bg.assigned(member.i, member.j)) {
                        others_assigned = false;
                        break;
                    }
                }
            if (!others_assigned) continue;

            auto patches = make_patches(bg.channels(), 2 * n, 2 * n);
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) {
                    const NodeCoord member{qi + di, qj + dj};
                    const Label& content =
                        (member == node) ? candidate : bg.at(member.i, member.j).label;
                    place_block(patches, content, dj * n, di * n);
                }
            energy += clique_potential(patches);
            ++quads;
        }
    }
    if (quads > 0) return energy;

    // Fallback: pair cliques with each assigned 4-connected neighbour,
    // concatenated in their true spatial arrangement.
    int pairs = 0;
    for (int d = 0; d < 4; ++d) {
        const NodeCoord nb{node.i + kDx[d], node.j + kDy[d]};
        if (nb.i < 0 || nb.i >= gw || nb.j < 0 || nb.j >= gh) continue;
        if (!bg.assigned(nb.i, nb.j)) continue;
        const bool horizontal = (kDy[d] == 0);
        auto patches = horizontal ? make_patches(bg.channels(), n, 2 * n)
                                  : make_patches(bg.channels(), 2 * n, n);
        if (horizontal) {
            place_block(patches, kDx[d] < 0 ? bg.at(nb.i, nb.j).label : candidate, 0, 0);
            place_block(patches, kDx[d] < 0 ? candidate : bg.at(nb.i, nb.j).label, 0, n);
        } else {
            place_block(patches, kDy[d] < 0 ? bg.at(nb.i, nb.j).label : candidate, 0, 0);
            place_block(patches, kDy[d] < 0 ? candidate : bg.at(nb.i, nb.j).label, n, 0);
        }
        energy += clique_potential(patches);
        ++pairs;
    }
    if (pairs == 0)
        fail_data("isolated node (" + std::to_string(node.i) + "," + std::to_string(node.j) +
                  "): no assigned neighbour");
    return energy;
}

std::vector<double> likelihood(const std::vector<long>& weights, long w_max) {
    if (weights.empty()) fail_usage("empty weight set");
    if (w_max < 1) fail_usage("weight cap must be >= 1");
    std::vector<double> capped(weights.size());
    double total = 0.0;
    for (size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] < 1) fail_usage("occurrence weights must be >= 1");
        capped[k] = double(std::min(w_max, weights[k]));
        total += capped[k];
    }
    for (double& v : capped) v /= total;
    return capped;
}

std::vector<double> prior(const std::vector<double>& energies, double temperature) {
    if (energies.empty()) fail_usage("empty energy set");
    if (temperature <= 0.0) fail_usage("temperature must be positive");
    const double lowest = *std::min_element(energies.begin(), energies.end());
    std::vector<double> probs(energies.size());
    double total = 0.0;
    for (size_t k = 0; k < energies.size(); ++k) {
        probs[k] = std::exp(-(energies[k] - lowest) / temperature);
        total += probs[k];
    }
    for (double& v : probs) v /= total;
    return probs;
}

std::vector<double> label_scores(const NodeState& state, const Background& bg, NodeCoord node,
                                 const MrfParams& p) {
    const int s = state.rep_count();
    if (s == 0) fail_data("uncovered node");
    if (s == 1) return {0.0};

    std::vector<long> weights(static_cast<size_t>(s));
    std::vector<double> energies(static_cast<size_t>(s));
    for (int k = 0; k < s; ++k) {
        weights[size_t(k)] = state.reps[size_t(k)].weight;
        energies[size_t(k)] = node_energy(bg, node, state.reps[size_t(k)].label);
    }
    const std::vector<double> lk = likelihood(weights, p.w_max);
    const std::vector<double> pr = prior(energies, p.temperature);
    std::vector<double> scores(static_cast<size_t>(s));
    for (int k = 0; k < s; ++k)
        scores[size_t(k)] = std::log(lk[size_t(k)]) + p.eta * std::log(pr[size_t(k)]);
    return scores;
}

int select_label(const NodeState& state, const Background& bg, NodeCoord node,
                 const MrfParams& p) {
    const std::vector<double> scores = label_scores(state, bg, node, p);
    int best = 0;
    for (int k = 1; k < int(scores.size()); ++k)
        if (scores[size_t(k)] > scores[size_t(best)]) best = k;
    return best;
}

namespace {

// Number of 2x2 cliques at `node` whose other three members are assigned.
int complete_quad_count(const Background& bg, NodeCoord node) {
    int count = 0;
    for (int qj = node.j - 1; qj <= node.j; ++qj)
        for (int qi = node.i - 1; qi <= node.i; ++qi) {
            if (qi < 0 || qj < 0 || qi + 1 >= bg.grid_width() || qj + 1 >= bg.grid_height())
                continue;
            bool ok = true;
            for (int dj = 0; dj < 2 && ok; ++dj)
                for (int di = 0; di < 2; ++di) {
                    const NodeCoord member{qi + di, qj + dj};
                    if (member == node) continue;
                    if (!bg.assigned(member.i, member.j)) {
                        ok = false;
                        break;
                    }
                }
            if (ok) ++count;
        }
    return count;
}

int assigned_neighbour_count(const Background& bg, NodeCoord node) {
    int count = 0;
    for (int d = 0; d < 4; ++d) {
        const int ni = node.i + kDx[d], nj = node.j + kDy[d];
        if (ni >= 0 && ni < bg.grid_width() && nj >= 0 && nj < bg.grid_height() &&
            bg.assigned(ni, nj))
            ++count;
    }
    return count;
}

// Seeds one node in each 4-connected region of unassigned nodes: the node
// closest to a grid corner, preferring heavier representatives on ties.
void seed_detached_regions(const Grid<NodeState>& states, Background& bg,
                           Grid<int>& assign_time, int time) {
    const int gw = bg.grid_width(), gh = bg.grid_height();
    Grid<unsigned char> visited(gw, gh, 0);
    for (int j = 0; j < gh; ++j) {
        for (int i = 0; i < gw; ++i) {
            if (bg.assigned(i, j) || visited.at(i, j)) continue;
            // Flood-fill the region.
            std::deque<NodeCoord> queue{{i, j}};
            visited.at(i, j) = 1;
            NodeCoord best{i, j};
            auto corner_dist = [gw, gh](NodeCoord n) {
                const int dx = std::min(n.i, gw - 1 - n.i);
                const int dy = std::min(n.j, gh - 1 - n.j);
                return dx + dy;
            };
            auto max_weight = [&states](NodeCoord n) {
                long w = 0;
                for (const auto& rep : states.at(n.i, n.j).reps) w = std::max(w, rep.weight);
                return w;
            };
            while (!queue.empty()) {
                const NodeCoord cur = queue.front();
                queue.pop_front();
                const bool better =
                    corner_dist(cur) < corner_dist(best) ||
                    (corner_dist(cur) == corner_dist(best) &&
                     (max_weight(cur) > max_weight(best) ||
                      (max_weight(cur) == max_weight(best) &&
                       raster_index(cur, gw) < raster_index(best, gw))));
                if (better) best = cur;
                for (int d = 0; d < 4; ++d) {
                    const int ni = cur.i + kDx[d], nj = cur.j + kDy[d];
                    if (ni < 0 || ni >= gw || nj < 0 || nj >= gh) continue;
                    if (bg.assigned(ni, nj) || visited.at(ni, nj)) continue;
                    visited.at(ni, nj) = 1;
                    queue.push_back({ni, nj});
                }
            }
            const NodeState& state = states.at(best.i, best.j);
            int rep = 0;
            for (int k = 1; k < state.rep_count(); ++k)
                if (state.reps[size_t(k)].weight > state.reps[size_t(rep)].weight) rep = k;
            bg.assign(best.i, best.j, rep, state.reps[size_t(rep)].label);
            assign_time.at(best.i, best.j) = time;
        }
    }
}

} // namespace

Background icm(const Grid<NodeState>& states, const MrfParams& p, IcmTrace* trace,
               const IcmSnapshotFn& snapshot) {
    if (p.max_iters < 1) fail_usage("max_iters must be >= 1");
    const int gw = states.width(), gh = states.height();

    Background bg = seed_background(states);
    Grid<int> assign_time(gw, gh, -1);
    int seeded = 0;
    bool corner_seeded = true;
    for (int j = 0; j < gh; ++j)
        for (int i = 0; i < gw; ++i)
            if (bg.assigned(i, j)) {
                assign_time.at(i, j) = 0;
                ++seeded;
                if (states.at(i, j).rep_count() == 1) corner_seeded = false;
            }
    if (trace) {
        trace->seed_assignments = seeded;
        trace->used_corner_seed = corner_seeded;
    }
    if (snapshot) snapshot(0, bg);

    // Fill pass: most-constrained node first (complete cliques, then
    // assigned neighbours, then raster order).
    int time = 1;
    int remaining = gw * gh - seeded;
    while (remaining > 0) {
        NodeCoord best{-1, -1};
        int best_quads = -1, best_nbrs = -1;
        for (int j = 0; j < gh; ++j) {
            for (int i = 0; i < gw; ++i) {
                if (bg.assigned(i, j)) continue;
                const int nbrs = assigned_neighbour_count(bg, {i, j});
                if (nbrs == 0) continue;
                const int quads = complete_quad_count(bg, {i, j});
                if (quads > best_quads || (quads == best_quads && nbrs > best_nbrs)) {
                    best = {i, j};
                    best_quads = quads;
                    best_nbrs = nbrs;
                }
            }
        }
        if (best.i < 0) {
            seed_detached_regions(states, bg, assign_time, time++);
            remaining = 0;
            for (int j = 0; j < gh; ++j)
                for (int i = 0; i < gw; ++i)
                    if (!bg.assigned(i, j)) ++remaining;
            continue;
        }
        const NodeState& state = states.at(best.i, best.j);
        const int rep = select_label(state, bg, best, p);
        bg.assign(best.i, best.j, rep, state.reps[size_t(rep)].label);
        assign_time.at(best.i, best.j) = time++;
        if (trace) ++trace->fill_assignments;
        --remaining;
    }
    if (snapshot) snapshot(1, bg);

    // Refinement: revisit only nodes whose 8-neighbourhood changed. The first
    // pass covers every multi-label node assigned before one of its
    // neighbours; later passes use the changes of the preceding pass.
    auto eight_neighbours = [gw, gh](NodeCoord n) {
        std::vector<NodeCoord> out;
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0) continue;
                const int ni = n.i + di, nj = n.j + dj;
                if (ni >= 0 && ni < gw && nj >= 0 && nj < gh) out.push_back({ni, nj});
            }
        return out;
    };

    std::set<int> changed;
    for (int pass = 1; pass <= p.max_iters; ++pass) {
        std::vector<NodeCoord> candidates;
        for (int j = 0; j < gh; ++j) {
            for (int i = 0; i < gw; ++i) {
                if (states.at(i, j).rep_count() < 2) continue;
                const NodeCoord node{i, j};
                bool flagged = false;
                if (pass == 1) {
                    for (const NodeCoord nb : eight_neighbours(node))
                        if (assign_time.at(nb.i, nb.j) > assign_time.at(i, j)) {
                            flagged = true;
                            break;
                        }
                } else {
                    for (const NodeCoord nb : eight_neighbours(node))
                        if (changed.count(raster_index(nb, gw))) {
                            flagged = true;
                            break;
                        }
                }
                if (flagged) candidates.push_back(node);
            }
        }

        changed.clear();
        int pass_changes = 0;
        for (const NodeCoord node : candidates) {
            const NodeState& state = states.at(node.i, node.j);
            const std::vector<double> scores = label_scores(state, bg, node, p);
            int best = 0;
            for (int k = 1; k < int(scores.size()); ++k)
                if (scores[size_t(k)] > scores[size_t(best)]) best = k;
            const int old = bg.at(node.i, node.j).rep_index;
            if (best != old) {
                if (trace)
                    trace->reassignments.push_back({node, pass, old, best,
                                                    scores[size_t(old)], scores[size_t(best)]});
                bg.assign(node.i, node.j, best, state.reps[size_t(best)].label);
                changed.insert(raster_index(node, gw));
                ++pass_changes;
            }
        }
        if (trace) trace->pass_changes.push_back(pass_changes);
        if (snapshot) snapshot(1 + pass, bg);
        if (pass_changes == 0) break;
    }
    return bg;
}

Frame assemble_background(const Background& bg) {
    if (!bg.complete()) fail_data("background incomplete");
    const int n = bg.block_size();
    Frame frame(bg.grid_width() * n, bg.grid_height() * n, bg.channels());
    for (int j = 0; j < bg.grid_height(); ++j)
        for (int i = 0; i < bg.grid_width(); ++i) {
            const Label& label = bg.at(i, j).label;
            for (int c = 0; c < bg.channels(); ++c)
                for (int y = 0; y < n; ++y)
                    for (int x = 0; x < n; ++x) {
                        const double v =
                            label.values[size_t(c) * n * n + size_t(y) * n + x];
                        frame.at(i * n + x, j * n + y, c) =
                            std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
                    }
        }
    return frame;
}

Frame estimate_background(const FrameSequence& seq, int block_size, const MrfParams& p,
                          IcmTrace* trace, const IcmSnapshotFn& snapshot) {
    CollectorParams cp{p.f_min, p.sim};
    const Grid<NodeState> states = collect(seq, block_size, cp);
    const Background bg = icm(states, p, trace, snapshot);
    return assemble_background(bg);
}

} // namespace bgmrf

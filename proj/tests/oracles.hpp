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

// Test-only reference implementations, kept independent of the library's
// computation paths: direct-summation DCT, first-principles scoring of a
// full labeling, exhaustive labeling search, and a per-pixel temporal median.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "core/mrf.hpp"

namespace oracle {

// O(n^4) orthonormal type-II DCT by direct summation.
inline bgmrf::Matrix naive_dct2(const bgmrf::Matrix& x) {
    const int rows = x.rows(), cols = x.cols();
    bgmrf::Matrix out(rows, cols);
    auto alpha = [](int k, int n) {
        return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    };
    for (int v = 0; v < rows; ++v)
        for (int u = 0; u < cols; ++u) {
            double sum = 0.0;
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    sum += x(r, c) *
                           std::cos(std::numbers::pi * (2 * r + 1) * v / (2.0 * rows)) *
                           std::cos(std::numbers::pi * (2 * c + 1) * u / (2.0 * cols));
            out(v, u) = alpha(v, rows) * alpha(u, cols) * sum;
        }
    return out;
}

inline double naive_clique_potential(const std::vector<bgmrf::Matrix>& patches) {
    double energy = 0.0;
    for (const bgmrf::Matrix& patch : patches) {
        bgmrf::Matrix t = naive_dct2(patch);
        for (int v = 0; v < t.rows(); ++v)
            for (int u = 0; u < t.cols(); ++u)
                if (v != 0 || u != 0) energy += std::abs(t(v, u));
    }
    return energy;
}

// Assembles the 2N x 2N patch of the 2x2 clique with top-left node (qi, qj)
// under a full labeling (raster-indexed representative choices).
inline std::vector<bgmrf::Matrix> assemble_quad(const bgmrf::Grid<bgmrf::NodeState>& states,
                                                const std::vector<int>& labeling, int qi, int qj) {
    const bgmrf::Label& probe = states.at(qi, qj).reps.front().label;
    const int n = probe.block_size;
    const int channels = probe.channels;
    std::vector<bgmrf::Matrix> patches(size_t(channels), bgmrf::Matrix(2 * n, 2 * n));
    for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di) {
            const int node = (qj + dj) * states.width() + (qi + di);
            const bgmrf::Label& label =
                states.at(qi + di, qj + dj).reps[size_t(labeling[size_t(node)])].label;
            for (int c = 0; c < channels; ++c)
                for (int y = 0; y < n; ++y)
                    for (int x = 0; x < n; ++x)
                        patches[size_t(c)](dj * n + y, di * n + x) =
                            label.values[size_t(c) * n * n + size_t(y) * n + x];
        }
    return patches;
}

// Joint posterior exponent of a complete labeling, computed from first
// principles: the sum of capped-weight log-likelihoods plus the weighted
// Gibbs exponent of the configuration, every 2x2 clique counted once. The
// configuration partition function is constant across labelings and is
// dropped, so enumeration ranks identically to the full log-posterior.
inline double labeling_objective(const bgmrf::Grid<bgmrf::NodeState>& states,
                                 const std::vector<int>& labeling, const bgmrf::MrfParams& p) {
    const int gw = states.width(), gh = states.height();
    double total = 0.0;
    for (int j = 0; j < gh; ++j) {
        for (int i = 0; i < gw; ++i) {
            const bgmrf::NodeState& state = states.at(i, j);
            const int s = state.rep_count();
            if (s == 1) continue;  // log(1)
            double weight_total = 0.0;
            for (int k = 0; k < s; ++k)
                weight_total += double(std::min(p.w_max, state.reps[size_t(k)].weight));
            const int chosen = labeling[size_t(j) * gw + i];
            total += std::log(
                double(std::min(p.w_max, state.reps[size_t(chosen)].weight)) / weight_total);
        }
    }
    for (int qj = 0; qj + 1 < gh; ++qj)
        for (int qi = 0; qi + 1 < gw; ++qi)
            total -= p.eta / p.temperature *
                     naive_clique_potential(assemble_quad(states, labeling, qi, qj));
    return total;
}

// All labelings by exhaustive enumeration; returns the best one.
inline std::pair<std::vector<int>, double> best_labeling(
    const bgmrf::Grid<bgmrf::NodeState>& states, const bgmrf::MrfParams& p) {
    const int nodes = states.width() * states.height();
    std::vector<int> counts(static_cast<size_t>(nodes));
    for (int j = 0; j < states.height(); ++j)
        for (int i = 0; i < states.width(); ++i)
            counts[size_t(j) * states.width() + i] = states.at(i, j).rep_count();

    std::vector<int> current(size_t(nodes), 0);
    std::vector<int> best = current;
    double best_score = labeling_objective(states, current, p);
    while (true) {
        int pos = 0;
        while (pos < nodes) {
            if (++current[size_t(pos)] < counts[size_t(pos)]) break;
            current[size_t(pos)] = 0;
            ++pos;
        }
        if (pos == nodes) break;
        const double score = labeling_objective(states, current, p);
        if (score > best_score) {
            best_score = score;
            best = current;
        }
    }
    return {best, best_score};
}

// Per-pixel temporal median over a sequence (ties resolved by the lower
// median, matching the usual order-statistic pick).
inline bgmrf::Frame temporal_median(const bgmrf::FrameSequence& seq) {
    bgmrf::Frame out(seq.width(), seq.height(), seq.channels());
    std::vector<std::uint8_t> column(size_t(seq.count()));
    for (size_t n = 0; n < out.data.size(); ++n) {
        for (int f = 0; f < seq.count(); ++f) column[size_t(f)] = seq.frames[size_t(f)].data[n];
        auto mid = column.begin() + (column.size() - 1) / 2;
        std::nth_element(column.begin(), mid, column.end());
        out.data[n] = *mid;
    }
    return out;
}

// --- toy-instance helpers ----------------------------------------------------

inline bgmrf::Label make_label(int block_size, int channels, const std::vector<double>& values) {
    bgmrf::Label label;
    label.block_size = block_size;
    label.channels = channels;
    label.values = values;
    return label;
}

// Random node-grid instance for labeling tests: every node holds 1..max_reps
// unique random blocks with weights spanning the cap boundary.
inline bgmrf::Grid<bgmrf::NodeState> random_instance(int gw, int gh, int block_size,
                                                     int max_reps, std::mt19937_64& rng,
                                                     long w_max) {
    bgmrf::Grid<bgmrf::NodeState> states(gw, gh);
    for (int j = 0; j < gh; ++j)
        for (int i = 0; i < gw; ++i) {
            bgmrf::NodeState& state = states.at(i, j);
            state.node = {i, j};
            const int reps = 1 + int(rng() % std::uint64_t(max_reps));
            for (int k = 0; k < reps; ++k) {
                std::vector<double> values(size_t(block_size) * block_size);
                for (double& v : values) v = double(rng() % 256);
                long weight = 1 + long(rng() % std::uint64_t(2 * w_max));
                if (rng() % 8 == 0) weight = w_max + (rng() % 2 ? 1 : -1);
                state.reps.push_back({make_label(block_size, 1, values), weight});
            }
        }
    return states;
}

} // namespace oracle

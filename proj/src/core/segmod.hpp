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

#include "core/blocks.hpp"

namespace bgmrf {

struct SegParams {
    int block_size = 16;
    int step = 8;
    int descriptor_dim = 4;   // DCT coefficients kept per channel
    double th_mahal = 0.0;    // <= 0 resolves to the chi-square 0.999 quantile
    double th_cos = 0.005;
    double th_temporal = 3.0;
    double var_floor = 1e-4;
    int em_max_iters = 100;
    double em_tol = 1e-6;
    double vote_threshold = 0.5;
};

/// Chi-square quantile used for the default Mahalanobis gate.
double mahal_threshold_for(int dof, double quantile = 0.999);

/// Diagonal Gaussian over block descriptors at one lattice location.
struct BlockModel {
    std::vector<double> mean;
    std::vector<double> var;  // diagonal covariance entries, floored
    int trained_on = 0;
    bool refit_single = false;  // degenerate mixture fit fell back to one Gaussian
};

/// Per-location Gaussians over the overlapping-block lattice of the
/// modelled frame geometry.
struct BackgroundModel {
    SegParams params;  // th_mahal resolved to a number
    int frame_width = 0, frame_height = 0, channels = 1;
    std::vector<int> xs, ys;  // lattice origins
    Grid<BlockModel> grid;
};

enum class BlockDecision : std::uint8_t {
    background_gaussian = 0,
    background_cosine = 1,
    background_temporal = 2,
    foreground = 3
};

inline bool is_background(BlockDecision d) { return d != BlockDecision::foreground; }

/// Carry-over between consecutive frames: previous descriptors and decisions.
struct SegState {
    struct Slot {
        std::vector<double> desc;
        bool valid = false;
        bool was_background = false;
    };
    Grid<Slot> slots;
};

using Mask = Frame;  // single channel, 0 = background, 255 = foreground

/// Fit a two-component diagonal-covariance mixture per location; keep the
/// dominant Gaussian when the weights differ by more than 0.5, otherwise fit
/// a single Gaussian to all samples.
BackgroundModel train_model(const FrameSequence& seq, const SegParams& params);

/// Replace every mean by the descriptor of the corresponding block of `bg`;
/// covariances are kept as-is. Lattice locations whose block extends past the
/// (cropped) background keep their trained mean.
void apply_mrf_means(BackgroundModel& model, const Frame& bg);

/// Three-stage cascade with short-circuit acceptance: Gaussian distance,
/// cosine distance, then the temporal check against the previous frame.
BlockDecision classify_block(const BlockModel& model, const std::vector<double>& desc,
                             const SegState::Slot& prev, const SegParams& params);

/// Per-pixel vote: foreground iff fg votes / covering blocks >= threshold.
Mask generate_mask(const std::vector<int>& xs, const std::vector<int>& ys,
                   const Grid<BlockDecision>& decisions, int block_size, int width, int height,
                   double vote_threshold);

struct SegmentResult {
    Mask mask;
    SegState state;
    Grid<BlockDecision> decisions;
};

SegmentResult segment(const BackgroundModel& model, const Frame& frame, const SegState& state);

/// True when the trailing `consecutive` entries all exceed `fraction`.
bool check_reinit(const std::vector<double>& fg_fractions, double fraction = 0.7,
                  int consecutive = 3);

double foreground_fraction(const Mask& mask);

/// Versioned binary model file ("BGM1", little-endian).
void save_model(const BackgroundModel& model, const std::filesystem::path& path);
BackgroundModel load_model(const std::filesystem::path& path);

} // namespace bgmrf

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

#include "core/segmod.hpp"

namespace bgmrf {

struct MaskScore {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f_measure = 0.0;
};

struct BgScore {
    double mad = 0.0;      // mean absolute sample difference (gray levels)
    double max_err = 0.0;
    long mismatched_pixels = 0;  // pixels where any channel differs
};

/// Pixel-level confusion counts; 255 is the positive (foreground) value.
MaskScore mask_metrics(const Mask& pred, const Mask& gt);

/// Absolute per-sample differences aggregated over the whole image.
BgScore background_error(const Frame& est, const Frame& gt);

struct DirectoryMaskScores {
    std::vector<std::pair<std::string, MaskScore>> per_frame;
    double mean_precision = 0.0, mean_recall = 0.0, mean_f = 0.0;
};

/// Pair mask files of two directories by sorted filename and score each pair.
/// Optionally writes one CSV row per frame.
DirectoryMaskScores evaluate_mask_dirs(const std::filesystem::path& pred_dir,
                                       const std::filesystem::path& gt_dir,
                                       const std::filesystem::path& csv_path = {});

/// key=value summary lines for reports.
std::string mask_score_text(const DirectoryMaskScores& scores);
std::string bg_score_text(const BgScore& score);

} // namespace bgmrf

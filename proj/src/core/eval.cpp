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

#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace bgmrf {

MaskScore mask_metrics(const Mask& pred, const Mask& gt) {
    if (pred.width != gt.width || pred.height != gt.height || pred.channels != 1 ||
        gt.channels != 1)
        fail_data("mask dimension mismatch");
    MaskScore score;
    for (size_t n = 0; n < pred.data.size(); ++n) {
        const bool p = pred.data[n] == 255;
        const bool g = gt.data[n] == 255;
        if (p && g) ++score.tp;
        else if (p && !g) ++score.fp;
        else if (!p && g) ++score.fn;
        else ++score.tn;
    }
    score.precision = (score.tp + score.fp) > 0 ? double(score.tp) / double(score.tp + score.fp) : 0.0;
    score.recall = (score.tp + score.fn) > 0 ? double(score.tp) / double(score.tp + score.fn) : 0.0;
    score.f_measure = (score.precision + score.recall) > 0.0
                          ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                          : 0.0;
    return score;
}

BgScore background_error(const Frame& est, const Frame& gt) {
    if (est.width != gt.width || est.height != gt.height || est.channels != gt.channels)
        fail_data("background dimension mismatch");
    BgScore score;
    double sum = 0.0;
    for (int y = 0; y < est.height; ++y)
        for (int x = 0; x < est.width; ++x) {
            bool pixel_differs = false;
            for (int c = 0; c < est.channels; ++c) {
                const double d = std::abs(double(est.at(x, y, c)) - double(gt.at(x, y, c)));
                sum += d;
                score.max_err = std::max(score.max_err, d);
                if (d > 0.0) pixel_differs = true;
            }
            if (pixel_differs) ++score.mismatched_pixels;
        }
    score.mad = est.data.empty() ? 0.0 : sum / double(est.data.size());
    return score;
}

namespace {

std::vector<std::filesystem::path> list_sorted(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) fail_data("no such directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    return files;
}

} // namespace

DirectoryMaskScores evaluate_mask_dirs(const std::filesystem::path& pred_dir,
                                       const std::filesystem::path& gt_dir,
                                       const std::filesystem::path& csv_path) {
    const auto pred_files = list_sorted(pred_dir);
    const auto gt_files = list_sorted(gt_dir);
    if (pred_files.size() != gt_files.size())
        fail_data("mask count mismatch: " + std::to_string(pred_files.size()) + " vs " +
                  std::to_string(gt_files.size()));
    if (pred_files.empty()) fail_data("no masks to score");

    DirectoryMaskScores out;
    std::ofstream csv;
    if (!csv_path.empty()) {
        csv.open(csv_path);
        if (!csv) fail_data("cannot open for writing: " + csv_path.string());
        csv << "frame,file,tp,fp,fn,tn,precision,recall,f_measure\n";
    }
    for (size_t n = 0; n < pred_files.size(); ++n) {
        const Mask pred = read_image(pred_files[n]);
        const Mask gt = read_image(gt_files[n]);
        const MaskScore score = mask_metrics(pred, gt);
        out.per_frame.emplace_back(pred_files[n].filename().string(), score);
        out.mean_precision += score.precision;
        out.mean_recall += score.recall;
        out.mean_f += score.f_measure;
        if (csv.is_open())
            csv << n + 1 << ',' << pred_files[n].filename().string() << ',' << score.tp << ','
                << score.fp << ',' << score.fn << ',' << score.tn << ',' << score.precision << ','
                << score.recall << ',' << score.f_measure << '\n';
    }
    const double count = double(out.per_frame.size());
    out.mean_precision /= count;
    out.mean_recall /= count;
    out.mean_f /= count;
    return out;
}

std::string mask_score_text(const DirectoryMaskScores& scores) {
    std::ostringstream out;
    out << "frames=" << scores.per_frame.size() << "\n"
        << "mean_precision=" << scores.mean_precision << "\n"
        << "mean_recall=" << scores.mean_recall << "\n"
        << "mean_f_measure=" << scores.mean_f << "\n";
    return out.str();
}

std::string bg_score_text(const BgScore& score) {
    std::ostringstream out;
    out << "mad=" << score.mad << "\n"
        << "max_err=" << score.max_err << "\n"
        << "mismatched_pixels=" << score.mismatched_pixels << "\n";
    return out.str();
}

} // namespace bgmrf

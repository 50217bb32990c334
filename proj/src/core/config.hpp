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
#include <string>

#include "core/mrf.hpp"
#include "core/segmod.hpp"

namespace bgmrf {

/// Full resolved parameter set. Keys load from key=value files and from
/// individual set() calls; unknown keys are rejected.
struct Config {
    int block_size = 16;
    int step = 8;
    bool step_explicit = false;  // when false, step tracks block_size / 2
    int descriptor_dim = 4;
    double t1 = 0.8;
    double t2 = 3.0;
    double sigma_floor = 1e-6;
    int f_min = 3;
    long w_max = 150;
    double temperature = 1024.0;
    double eta = 3.0;
    int max_iters = 20;
    int frames = 200;  // training-frame cap, 0 = all
    std::uint64_t seed = 1;
    double th_mahal = 0.0;  // <= 0: chi-square default at train time
    double th_cos = 0.005;
    double th_temporal = -1.0;  // < 0: tracks t2
    double var_floor = 1e-4;
    int em_max_iters = 100;
    double em_tol = 1e-6;
    double vote_threshold = 0.5;
    bool reinit = false;
    double reinit_fraction = 0.7;
    int reinit_consecutive = 3;
    std::string snapshot_dir;
    std::string pattern;

    /// Set one key; validates and throws usage errors on unknown keys or
    /// out-of-range values.
    void set(const std::string& key, const std::string& value);

    /// Apply every key of a key=value file ('#' comments allowed).
    void load_file(const std::filesystem::path& path);

    /// Final cross-field validation.
    void finalize() const;

    /// Deterministic key=value dump of the resolved parameter set.
    std::string echo() const;

    /// One resolved value as text; throws on unknown keys.
    std::string get(const std::string& key) const;

    SimilarityParams similarity_params() const { return {t1, t2, sigma_floor}; }
    CollectorParams collector_params() const { return {f_min, similarity_params()}; }
    MrfParams mrf_params() const {
        return {temperature, w_max, eta, max_iters, similarity_params(), f_min};
    }
    SegParams seg_params() const {
        return {block_size, step, descriptor_dim, th_mahal, th_cos,
                th_temporal < 0 ? t2 : th_temporal, var_floor, em_max_iters, em_tol,
                vote_threshold};
    }
};

} // namespace bgmrf

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

#include "core/blocks.hpp"

namespace bgmrf {

struct SimilarityParams {
    double t1 = 0.8;           // correlation threshold
    double t2 = 3.0;           // mean-absolute-difference threshold (gray levels)
    double sigma_floor = 1e-6; // std-dev at or below which a block counts as flat
};

/// Pearson correlation of the two value vectors. Throws "undefined
/// correlation" when either block is flat (std-dev <= sigma_floor);
/// callers must use the flat-block path of similar() instead.
double correlation(const Label& a, const Label& b, double sigma_floor = 1e-6);

/// Mean of absolute element differences.
double mad(const Label& a, const Label& b);

/// Two labels carry the same background content when correlation > t1 and
/// mad < t2. Two flat blocks compare by |mean difference| < t2; a flat and
/// a textured block are never similar.
bool similar(const Label& a, const Label& b, const SimilarityParams& p);

} // namespace bgmrf

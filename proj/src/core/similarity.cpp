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

#include "core/similarity.hpp"

#include <cmath>

#include "core/error.hpp"

namespace bgmrf {

namespace {

void require_same_length(const Label& a, const Label& b) {
    if (a.values.size() != b.values.size() || a.values.empty())
        fail_data("label length mismatch");
}

struct Moments {
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation
};

Moments moments(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / double(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / double(v.size()))};
}

} // namespace

double correlation(const Label& a, const Label& b, double sigma_floor) {
    require_same_length(a, b);
    const Moments ma = moments(a.values);
    const Moments mb = moments(b.values);
    if (ma.sd <= sigma_floor || mb.sd <= sigma_floor)
        fail_data("undefined correlation: flat block");
    double dot = 0.0;
    for (size_t n = 0; n < a.values.size(); ++n)
        dot += (a.values[n] - ma.mean) * (b.values[n] - mb.mean);
    return dot / (double(a.values.size()) * ma.sd * mb.sd);
}

double mad(const Label& a, const Label& b) {
    require_same_length(a, b);
    double sum = 0.0;
    for (size_t n = 0; n < a.values.size(); ++n) sum += std::abs(a.values[n] - b.values[n]);
    return sum / double(a.values.size());
}

bool similar(const Label& a, const Label& b, const SimilarityParams& p) {
    require_same_length(a, b);
    const Moments ma = moments(a.values);
    const Moments mb = moments(b.values);
    const bool flat_a = ma.sd <= p.sigma_floor;
    const bool flat_b = mb.sd <= p.sigma_floor;
    if (flat_a && flat_b) return std::abs(ma.mean - mb.mean) < p.t2;
    if (flat_a != flat_b) return false;

    double dot = 0.0;
    for (size_t n = 0; n < a.values.size(); ++n)
        dot += (a.values[n] - ma.mean) * (b.values[n] - mb.mean);
    const double corr = dot / (double(a.values.size()) * ma.sd * mb.sd);
    return corr > p.t1 && mad(a, b) < p.t2;
}

} // namespace bgmrf

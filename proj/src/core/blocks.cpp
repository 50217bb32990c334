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

#include "core/blocks.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "core/error.hpp"

namespace bgmrf {

namespace {

// Orthonormal DCT-II basis: row u holds alpha(u) * cos(pi (2x+1) u / 2n).
Matrix make_dct_basis(int n) {
    Matrix basis(n, n);
    const double a0 = std::sqrt(1.0 / n);
    const double a = std::sqrt(2.0 / n);
    for (int u = 0; u < n; ++u)
        for (int x = 0; x < n; ++x)
            basis(u, x) = (u == 0 ? a0 : a) *
                          std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * n));
    return basis;
}

const Matrix& dct_basis(int n) {
    static std::map<int, Matrix> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_dct_basis(n)).first;
    return it->second;
}

} // namespace

Matrix Label::channel_matrix(int c) const {
    const int n = block_size;
    Matrix m(n, n);
    const double* src = values.data() + size_t(c) * n * n;
    std::copy(src, src + size_t(n) * n, m.data().begin());
    return m;
}

Matrix dct2_rect(const Matrix& block) {
    if (block.rows() < 2 || block.cols() < 2) fail_usage("block side must be at least 2");
    const Matrix& cr = dct_basis(block.rows());
    const Matrix& cc = dct_basis(block.cols());
    return matmul(matmul(cr, block), transpose(cc));
}

Matrix idct2_rect(const Matrix& coeffs) {
    const Matrix& cr = dct_basis(coeffs.rows());
    const Matrix& cc = dct_basis(coeffs.cols());
    return matmul(matmul(transpose(cr), coeffs), cc);
}

Matrix dct2(const Matrix& block) {
    if (block.rows() != block.cols()) fail_usage("shape error: dct2 requires a square matrix");
    return dct2_rect(block);
}

Matrix idct2(const Matrix& coeffs) {
    if (coeffs.rows() != coeffs.cols()) fail_usage("shape error: idct2 requires a square matrix");
    return idct2_rect(coeffs);
}

std::vector<std::pair<int, int>> zigzag_order(int n) {
    std::vector<std::pair<int, int>> order;
    order.reserve(size_t(n) * n);
    for (int s = 0; s <= 2 * (n - 1); ++s) {
        if (s % 2 == 0) {
            for (int r = std::min(s, n - 1); r >= std::max(0, s - n + 1); --r)
                order.emplace_back(r, s - r);
        } else {
            for (int r = std::max(0, s - n + 1); r <= std::min(s, n - 1); ++r)
                order.emplace_back(r, s - r);
        }
    }
    return order;
}

Label extract_block(const Frame& frame, int x0, int y0, int block_size) {
    const int n = block_size;
    Label label;
    label.block_size = n;
    label.channels = frame.channels;
    label.source_frame = frame.index;
    label.values.resize(size_t(frame.channels) * n * n);
    for (int c = 0; c < frame.channels; ++c) {
        double* dst = label.values.data() + size_t(c) * n * n;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                dst[size_t(y) * n + x] = double(frame.at(x0 + x, y0 + y, c));
    }
    return label;
}

Grid<Label> partition(const Frame& frame, int block_size) {
    if (block_size < 2) fail_usage("block side must be at least 2");
    if (block_size > std::min(frame.width, frame.height))
        fail_data("block larger than frame");
    const int gw = frame.width / block_size;
    const int gh = frame.height / block_size;
    Grid<Label> grid(gw, gh);
    for (int j = 0; j < gh; ++j) {
        for (int i = 0; i < gw; ++i) {
            Label label = extract_block(frame, i * block_size, j * block_size, block_size);
            label.node = {i, j};
            grid.at(i, j) = std::move(label);
        }
    }
    return grid;
}

Descriptor block_descriptor(const Label& label, int dim) {
    const int n = label.block_size;
    if (dim < 1 || dim > n * n) fail_usage("descriptor dimension out of range");
    const auto order = zigzag_order(n);
    Descriptor d;
    d.coeffs.reserve(size_t(label.channels) * dim);
    for (int c = 0; c < label.channels; ++c) {
        const Matrix coeffs = dct2(label.channel_matrix(c));
        for (int t = 0; t < dim; ++t) d.coeffs.push_back(coeffs(order[size_t(t)].first, order[size_t(t)].second));
    }
    return d;
}

std::vector<int> overlap_origins(int extent, int block_size, int step) {
    std::vector<int> origins;
    for (int o = 0; o + block_size <= extent; o += step) origins.push_back(o);
    if (origins.empty() || origins.back() != extent - block_size)
        origins.push_back(extent - block_size);
    return origins;
}

std::vector<OverlapBlock> overlapping_blocks(const Frame& frame, int block_size, int step) {
    if (step < 1 || step > block_size) fail_usage("step must be in [1, block size]");
    if (block_size > std::min(frame.width, frame.height))
        fail_data("block larger than frame");
    const auto xs = overlap_origins(frame.width, block_size, step);
    const auto ys = overlap_origins(frame.height, block_size, step);
    std::vector<OverlapBlock> blocks;
    blocks.reserve(xs.size() * ys.size());
    for (size_t yi = 0; yi < ys.size(); ++yi) {
        for (size_t xi = 0; xi < xs.size(); ++xi) {
            OverlapBlock b;
            b.x = xs[xi];
            b.y = ys[yi];
            b.label = extract_block(frame, b.x, b.y, block_size);
            b.label.node = {int(xi), int(yi)};
            blocks.push_back(std::move(b));
        }
    }
    return blocks;
}

} // namespace bgmrf

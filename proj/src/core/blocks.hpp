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

#include <utility>
#include <vector>

#include "core/grid.hpp"
#include "core/imagio.hpp"
#include "core/matrix.hpp"

namespace bgmrf {

/// Position of a block in the non-overlapping node grid (i = column, j = row).
struct NodeCoord {
    int i = 0;
    int j = 0;
};

inline bool operator==(NodeCoord a, NodeCoord b) { return a.i == b.i && a.j == b.j; }

/// Vectorised content of one block instance: channel-major, row-major within
/// each channel, values in [0, 255].
struct Label {
    NodeCoord node;
    int source_frame = 0;  // 1-based frame index the content came from
    int block_size = 0;
    int channels = 1;
    std::vector<double> values;

    /// N x N matrix view of one channel.
    Matrix channel_matrix(int c) const;
};

/// Low-dimensional block feature: per channel, the first `dim` zigzag-ordered
/// 2D DCT coefficients starting at the DC term. Channel-major layout.
struct Descriptor {
    std::vector<double> coeffs;
};

/// Orthonormal type-II 2D DCT of a square matrix; errors on non-square input.
Matrix dct2(const Matrix& block);

/// Inverse of dct2.
Matrix idct2(const Matrix& coeffs);

/// Rectangular variant used for concatenated block patches.
Matrix dct2_rect(const Matrix& block);
Matrix idct2_rect(const Matrix& coeffs);

/// (row, col) visiting order of the JPEG-style zigzag scan over an n x n grid.
std::vector<std::pair<int, int>> zigzag_order(int n);

/// Copy the block at pixel origin (x0, y0) out of a frame.
Label extract_block(const Frame& frame, int x0, int y0, int block_size);

/// Split a frame into the non-overlapping block grid; right/bottom remainders
/// are cropped. Grid dims are (W/N, H/N) by integer division.
Grid<Label> partition(const Frame& frame, int block_size);

/// Descriptor of a label (dim coefficients per channel).
Descriptor block_descriptor(const Label& label, int dim);

/// Origins of an overlapping-block lattice along one axis: multiples of
/// `step`, with a final origin clamped to extent-block so coverage is total.
std::vector<int> overlap_origins(int extent, int block_size, int step);

struct OverlapBlock {
    int x = 0, y = 0;  // pixel origin
    Label label;
};

/// All overlapping blocks of a frame on the clamped step lattice.
std::vector<OverlapBlock> overlapping_blocks(const Frame& frame, int block_size, int step);

} // namespace bgmrf

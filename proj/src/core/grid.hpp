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

#include <cassert>
#include <vector>

namespace bgmrf {

/// Dense 2D container indexed (i = column, j = row).
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height) : width_(width), height_(height), cells_(size_t(width) * height) {}
    Grid(int width, int height, const T& fill)
        : width_(width), height_(height), cells_(size_t(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return cells_.size(); }
    bool contains(int i, int j) const { return i >= 0 && i < width_ && j >= 0 && j < height_; }

    T& at(int i, int j) {
        assert(contains(i, j));
        return cells_[size_t(j) * width_ + i];
    }
    const T& at(int i, int j) const {
        assert(contains(i, j));
        return cells_[size_t(j) * width_ + i];
    }

    auto begin() { return cells_.begin(); }
    auto end() { return cells_.end(); }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

private:
    int width_ = 0, height_ = 0;
    std::vector<T> cells_;
};

} // namespace bgmrf

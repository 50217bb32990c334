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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bgmrf {

/// One image of a sequence: 8-bit samples, row-major, channel-interleaved.
struct Frame {
    int width = 0;
    int height = 0;
    int channels = 1;  // 1 (gray) or 3 (RGB)
    int index = 0;     // 1-based position in its sequence, 0 if standalone
    std::vector<std::uint8_t> data;

    Frame() = default;
    Frame(int w, int h, int ch, std::uint8_t fill = 0)
        : width(w), height(h), channels(ch), data(size_t(w) * h * ch, fill) {}

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(size_t(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(size_t(y) * width + x) * channels + c];
    }
    size_t sample_count() const { return data.size(); }
};

inline bool operator==(const Frame& a, const Frame& b) {
    return a.width == b.width && a.height == b.height && a.channels == b.channels &&
           a.data == b.data;
}

struct FrameSequence {
    std::vector<Frame> frames;

    int count() const { return int(frames.size()); }
    int width() const { return frames.empty() ? 0 : frames.front().width; }
    int height() const { return frames.empty() ? 0 : frames.front().height; }
    int channels() const { return frames.empty() ? 0 : frames.front().channels; }
};

enum class ImageFormat { pgm, ppm, png };

/// Decode a single PGM (P5) / PPM (P6) / 8-bit gray or RGB PNG file.
Frame read_image(const std::filesystem::path& path);

/// Read all frames matching `pattern` (fnmatch glob) in lexicographic filename
/// order; empty pattern means "any file with a supported extension".
/// `max_frames` > 0 caps the number of frames consumed.
FrameSequence read_sequence(const std::filesystem::path& dir, const std::string& pattern = "",
                            int max_frames = 0);

/// Write a frame; the file round-trips bit-exactly through read_image.
/// Writes are atomic (temp file + rename).
void write_image(const Frame& frame, const std::filesystem::path& path, ImageFormat format);

/// Format deduced from the file extension (.pgm/.ppm/.png).
void write_image(const Frame& frame, const std::filesystem::path& path);

} // namespace bgmrf

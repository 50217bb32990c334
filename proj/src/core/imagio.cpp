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

#include "core/imagio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <png.h>
#include <fnmatch.h>

#include "core/error.hpp"

namespace bgmrf {

namespace {

[[noreturn]] void decode_error(const std::filesystem::path& path, const std::string& why) {
    fail_data("decode error: " + path.string() + " (" + why + ")");
}

// --- PNM (P5/P6) ------------------------------------------------------------

// Reads the next PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            tok.push_back(char(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(char(c));
    return tok;
}

Frame read_pnm(const std::filesystem::path& path, std::ifstream& in, int channels) {
    const std::string ws = pnm_token(in);
    const std::string hs = pnm_token(in);
    const std::string ms = pnm_token(in);
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ws);
        h = std::stoi(hs);
        maxval = std::stoi(ms);
    } catch (...) {
        decode_error(path, "bad header");
    }
    if (w <= 0 || h <= 0) decode_error(path, "bad dimensions");
    if (maxval != 255) decode_error(path, "unsupported maxval");
    Frame frame(w, h, channels);
    in.read(reinterpret_cast<char*>(frame.data.data()), std::streamsize(frame.data.size()));
    if (size_t(in.gcount()) != frame.data.size()) decode_error(path, "truncated payload");
    return frame;
}

// --- PNG --------------------------------------------------------------------

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

Frame read_png(const std::filesystem::path& path) {
    PngReadCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) decode_error(path, "cannot open");
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) decode_error(path, "png init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) decode_error(path, "png init failed");
    if (setjmp(png_jmpbuf(ctx.png))) decode_error(path, "corrupt png");

    png_init_io(ctx.png, ctx.fp);
    png_read_info(ctx.png, ctx.info);

    const png_byte depth = png_get_bit_depth(ctx.png, ctx.info);
    const png_byte color = png_get_color_type(ctx.png, ctx.info);
    if (depth != 8) decode_error(path, "unsupported bit depth");
    if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB)
        decode_error(path, "unsupported color type");

    const int w = int(png_get_image_width(ctx.png, ctx.info));
    const int h = int(png_get_image_height(ctx.png, ctx.info));
    const int channels = (color == PNG_COLOR_TYPE_GRAY) ? 1 : 3;

    Frame frame(w, h, channels);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[size_t(y)] = frame.data.data() + size_t(y) * w * channels;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return frame;
}

void write_png(const Frame& frame, const std::filesystem::path& path) {
    PngWriteCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) fail_data("cannot open for writing: " + path.string());
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) fail_data("png init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) fail_data("png init failed");
    if (setjmp(png_jmpbuf(ctx.png))) fail_data("png write failed: " + path.string());

    png_init_io(ctx.png, ctx.fp);
    const int color = frame.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(ctx.png, ctx.info, png_uint_32(frame.width), png_uint_32(frame.height), 8, color,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    std::vector<png_bytep> rows(frame.height);
    for (int y = 0; y < frame.height; ++y)
        rows[size_t(y)] = const_cast<png_bytep>(frame.data.data()) +
                          size_t(y) * frame.width * frame.channels;
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

bool has_supported_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return ext == ".pgm" || ext == ".ppm" || ext == ".png";
}

void write_pnm(const Frame& frame, const std::filesystem::path& path, bool color) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_data("cannot open for writing: " + path.string());
    out << (color ? "P6" : "P5") << "\n"
        << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.data.data()),
              std::streamsize(frame.data.size()));
    if (!out) fail_data("write failed: " + path.string());
}

} // namespace

Frame read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("decode error: " + path.string() + " (cannot open)");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) decode_error(path, "too short");
    if (magic[0] == 'P' && magic[1] == '5') return read_pnm(path, in, 1);
    if (magic[0] == 'P' && magic[1] == '6') return read_pnm(path, in, 3);
    if (magic[0] == char(0x89) && magic[1] == 'P') {
        in.close();
        return read_png(path);
    }
    decode_error(path, "unknown format");
}

FrameSequence read_sequence(const std::filesystem::path& dir, const std::string& pattern,
                            int max_frames) {
    if (!std::filesystem::is_directory(dir)) fail_data("no such directory: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (pattern.empty()) {
            if (!has_supported_extension(entry.path())) continue;
        } else if (fnmatch(pattern.c_str(), name.c_str(), 0) != 0) {
            continue;
        }
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    if (files.empty()) fail_data("no frames in " + dir.string());
    if (max_frames > 0 && int(files.size()) > max_frames) files.resize(size_t(max_frames));

    FrameSequence seq;
    seq.frames.reserve(files.size());
    for (const auto& file : files) {
        Frame frame = read_image(file);
        frame.index = int(seq.frames.size()) + 1;
        if (!seq.frames.empty()) {
            const Frame& first = seq.frames.front();
            if (frame.width != first.width || frame.height != first.height ||
                frame.channels != first.channels)
                fail_data("dimension mismatch: " + file.string());
        }
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

void write_image(const Frame& frame, const std::filesystem::path& path, ImageFormat format) {
    if (frame.channels != 1 && frame.channels != 3) fail_data("unsupported channel count");
    if (format == ImageFormat::pgm && frame.channels != 1)
        fail_data("format/channel mismatch: pgm requires a single channel");
    if (format == ImageFormat::ppm && frame.channels != 3)
        fail_data("format/channel mismatch: ppm requires three channels");

    std::filesystem::path tmp = path;
    tmp += ".tmp";
    switch (format) {
    case ImageFormat::pgm: write_pnm(frame, tmp, false); break;
    case ImageFormat::ppm: write_pnm(frame, tmp, true); break;
    case ImageFormat::png: write_png(frame, tmp); break;
    }
    std::filesystem::rename(tmp, path);
}

void write_image(const Frame& frame, const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".pgm") return write_image(frame, path, ImageFormat::pgm);
    if (ext == ".ppm") return write_image(frame, path, ImageFormat::ppm);
    if (ext == ".png") return write_image(frame, path, ImageFormat::png);
    fail_usage("unknown image extension: " + path.string());
}

} // namespace bgmrf

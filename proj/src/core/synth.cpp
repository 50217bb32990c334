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

#include "core/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "core/error.hpp"

namespace bgmrf {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        fail_data("scene spec: bad number '" + s + "' for " + what);
    }
}

int to_int(const std::string& s, const std::string& what) {
    const double v = to_double(s, what);
    if (v != std::floor(v)) fail_data("scene spec: expected integer for " + what);
    return int(v);
}

// Bounded draw by rejection so output is identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }
    int uniform(int lo, int hi) {  // inclusive
        return lo + int(below(std::uint64_t(hi - lo + 1)));
    }

private:
    std::mt19937_64 eng_;
};

} // namespace

Texture Texture::parse(const std::string& text) {
    const auto head = split(text, ':');
    const std::string kind = trim(head[0]);
    std::vector<std::string> args;
    if (head.size() > 1) args = split(head[1], ',');
    auto arg = [&](size_t n, const char* what) {
        if (n >= args.size()) fail_data(std::string("scene spec: texture missing ") + what);
        return to_double(trim(args[n]), what);
    };

    Texture t;
    if (kind == "flat") {
        t.kind = Kind::flat;
        t.p0 = arg(0, "value");
    } else if (kind == "gradient") {
        t.kind = Kind::gradient;
        t.p0 = arg(0, "base");
        t.p1 = arg(1, "gx");
        t.p2 = arg(2, "gy");
    } else if (kind == "checker") {
        t.kind = Kind::checker;
        t.p0 = arg(0, "cell");
        t.p1 = arg(1, "value a");
        t.p2 = arg(2, "value b");
        if (t.p0 < 1) fail_data("scene spec: checker cell must be >= 1");
    } else if (kind == "waves") {
        t.kind = Kind::waves;
        t.p0 = arg(0, "base");
        t.p1 = arg(1, "x amplitude");
        t.p2 = arg(2, "x period");
        t.p3 = arg(3, "y amplitude");
        t.p4 = arg(4, "y period");
        if (t.p2 <= 0 || t.p4 <= 0) fail_data("scene spec: wave periods must be positive");
    } else if (kind == "invert") {
        t.kind = Kind::invert;
    } else {
        fail_data("scene spec: unknown texture '" + kind + "'");
    }
    return t;
}

double Texture::value(double x, double y, int channel, const Texture* background) const {
    switch (kind) {
    case Kind::flat: return p0;
    case Kind::gradient: return p0 + p1 * x + p2 * y + 7.0 * channel;
    case Kind::checker: {
        const int cx = int(std::floor(x / p0));
        const int cy = int(std::floor(y / p0));
        return ((cx + cy) % 2 == 0) ? p1 : p2;
    }
    case Kind::waves:
        return p0 + p1 * std::sin(2.0 * std::numbers::pi * x / p2) +
               p3 * std::sin(2.0 * std::numbers::pi * y / p4) + 5.0 * channel;
    case Kind::invert:
        if (!background) fail_data("scene spec: invert texture requires a background");
        return 255.0 - background->value(x, y, channel, nullptr);
    }
    return 0.0;
}

std::pair<int, int> ObjectSpec::position(int f) const {
    switch (motion) {
    case Motion::park: return {x0, y0};
    case Motion::steps: {
        const int hops = (f - from) / std::max(1, every);
        return {x0 + dx * hops, y0 + dy * hops};
    }
    case Motion::linear: {
        if (to == from) return {x0, y0};
        const double t = double(f - from) / double(to - from);
        return {int(std::lround(x0 + (x1 - x0) * t)), int(std::lround(y0 + (y1 - y0) * t))};
    }
    }
    return {x0, y0};
}

void SceneSpec::validate() const {
    if (width < 1 || height < 1) fail_data("scene spec: bad dimensions");
    if (channels != 1 && channels != 3) fail_data("scene spec: channels must be 1 or 3");
    if (frames < 1) fail_data("scene spec: frames must be >= 1");
    if (noise < 0) fail_data("scene spec: noise must be >= 0");
    for (const ObjectSpec& obj : objects) {
        if (obj.width < 1 || obj.height < 1) fail_data("scene spec: bad object size");
        if (obj.from < 1 || obj.to > frames || obj.from > obj.to)
            fail_data("scene spec: object visibility outside [1, frames]");
        for (int f = obj.from; f <= obj.to; ++f) {
            const auto [x, y] = obj.position(f);
            if (x < 0 || y < 0 || x + obj.width > width || y + obj.height > height)
                fail_data("scene spec: object leaves the frame at frame " + std::to_string(f));
        }
    }
}

SceneSpec parse_scene_spec_text(const std::string& text) {
    SceneSpec spec;
    bool have_background = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) fail_data("scene spec: expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "width") spec.width = to_int(value, key);
        else if (key == "height") spec.height = to_int(value, key);
        else if (key == "channels") spec.channels = to_int(value, key);
        else if (key == "frames") spec.frames = to_int(value, key);
        else if (key == "seed") spec.seed = std::uint64_t(to_double(value, key));
        else if (key == "noise") spec.noise = to_int(value, key);
        else if (key == "background") {
            spec.background = Texture::parse(value);
            have_background = true;
        } else if (key == "object") {
            ObjectSpec obj;
            bool have_rect = false, have_motion = false, have_visible = false;
            for (const std::string& raw : split(value, ';')) {
                const std::string part = trim(raw);
                if (part.empty()) continue;
                const size_t peq = part.find('=');
                if (peq == std::string::npos)
                    fail_data("scene spec: bad object attribute '" + part + "'");
                const std::string pk = trim(part.substr(0, peq));
                const std::string pv = trim(part.substr(peq + 1));
                if (pk == "rect") {
                    const auto wh = split(pv, 'x');
                    if (wh.size() != 2) fail_data("scene spec: rect must be WxH");
                    obj.width = to_int(trim(wh[0]), "rect width");
                    obj.height = to_int(trim(wh[1]), "rect height");
                    have_rect = true;
                } else if (pk == "texture") {
                    obj.texture = Texture::parse(pv);
                } else if (pk == "park") {
                    const auto xy = split(pv, ',');
                    if (xy.size() != 2) fail_data("scene spec: park must be x,y");
                    obj.motion = ObjectSpec::Motion::park;
                    obj.x0 = to_int(trim(xy[0]), "park x");
                    obj.y0 = to_int(trim(xy[1]), "park y");
                    have_motion = true;
                } else if (pk == "steps") {
                    const auto a = split(pv, ',');
                    if (a.size() != 5) fail_data("scene spec: steps must be x0,y0,dx,dy,every");
                    obj.motion = ObjectSpec::Motion::steps;
                    obj.x0 = to_int(trim(a[0]), "steps x0");
                    obj.y0 = to_int(trim(a[1]), "steps y0");
                    obj.dx = to_int(trim(a[2]), "steps dx");
                    obj.dy = to_int(trim(a[3]), "steps dy");
                    obj.every = to_int(trim(a[4]), "steps every");
                    if (obj.every < 1) fail_data("scene spec: steps every must be >= 1");
                    have_motion = true;
                } else if (pk == "linear") {
                    const auto a = split(pv, ',');
                    if (a.size() != 4) fail_data("scene spec: linear must be x0,y0,x1,y1");
                    obj.motion = ObjectSpec::Motion::linear;
                    obj.x0 = to_int(trim(a[0]), "linear x0");
                    obj.y0 = to_int(trim(a[1]), "linear y0");
                    obj.x1 = to_int(trim(a[2]), "linear x1");
                    obj.y1 = to_int(trim(a[3]), "linear y1");
                    have_motion = true;
                } else if (pk == "visible") {
                    const auto a = split(pv, '-');
                    if (a.size() != 2) fail_data("scene spec: visible must be f0-f1");
                    obj.from = to_int(trim(a[0]), "visible from");
                    obj.to = to_int(trim(a[1]), "visible to");
                    have_visible = true;
                } else {
                    fail_data("scene spec: unknown object attribute '" + pk + "'");
                }
            }
            if (!have_rect || !have_motion || !have_visible)
                fail_data("scene spec: object needs rect, a motion and visible");
            spec.objects.push_back(obj);
        } else {
            fail_data("scene spec: unknown key '" + key + "'");
        }
    }
    if (!have_background) fail_data("scene spec: background is required");
    spec.validate();
    return spec;
}

SceneSpec parse_scene_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail_data("cannot open scene spec: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_spec_text(buf.str());
}

SynthResult generate(const SceneSpec& spec) {
    spec.validate();
    SynthResult result;

    auto sample = [&](const Texture& t, double x, double y, int c) {
        const double v = t.value(x, y, c, &spec.background);
        return std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
    };

    result.gt_background = Frame(spec.width, spec.height, spec.channels);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            for (int c = 0; c < spec.channels; ++c)
                result.gt_background.at(x, y, c) = sample(spec.background, x, y, c);

    Rng rng(spec.seed);
    result.frames.frames.reserve(size_t(spec.frames));
    result.gt_masks.reserve(size_t(spec.frames));
    for (int f = 1; f <= spec.frames; ++f) {
        Frame frame = result.gt_background;
        frame.index = f;
        Mask mask(spec.width, spec.height, 1, 0);
        mask.index = f;

        for (const ObjectSpec& obj : spec.objects) {
            if (!obj.visible(f)) continue;
            const auto [ox, oy] = obj.position(f);
            for (int y = 0; y < obj.height; ++y)
                for (int x = 0; x < obj.width; ++x) {
                    for (int c = 0; c < spec.channels; ++c)
                        frame.at(ox + x, oy + y, c) = sample(obj.texture, ox + x, oy + y, c);
                    mask.at(ox + x, oy + y) = 255;
                }
        }

        if (spec.noise > 0) {
            for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x)
                    for (int c = 0; c < spec.channels; ++c) {
                        const int delta = rng.uniform(-spec.noise, spec.noise);
                        const int v = int(frame.at(x, y, c)) + delta;
                        frame.at(x, y, c) = std::uint8_t(std::clamp(v, 0, 255));
                    }
        }

        result.frames.frames.push_back(std::move(frame));
        result.gt_masks.push_back(std::move(mask));
    }
    return result;
}

void generate_to_dir(const SceneSpec& spec, const std::filesystem::path& out_dir) {
    const SynthResult result = generate(spec);
    std::filesystem::create_directories(out_dir / "frames");
    std::filesystem::create_directories(out_dir / "masks");

    const char* ext = spec.channels == 1 ? ".pgm" : ".ppm";
    const ImageFormat fmt = spec.channels == 1 ? ImageFormat::pgm : ImageFormat::ppm;
    char name[32];
    for (const Frame& frame : result.frames.frames) {
        std::snprintf(name, sizeof(name), "frame_%06d%s", frame.index, ext);
        write_image(frame, out_dir / "frames" / name, fmt);
    }
    for (const Mask& mask : result.gt_masks) {
        std::snprintf(name, sizeof(name), "mask_%06d.pgm", mask.index);
        write_image(mask, out_dir / "masks" / name, ImageFormat::pgm);
    }
    write_image(result.gt_background, out_dir / (std::string("gt_background") + ext), fmt);
}

} // namespace bgmrf

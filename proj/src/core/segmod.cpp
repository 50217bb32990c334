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

#include "core/segmod.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "core/error.hpp"

namespace bgmrf {

double mahal_threshold_for(int dof, double quantile) {
    const boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::quantile(dist, quantile);
}

namespace {

double sq(double x) { return x * x; }

double distance2(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (size_t n = 0; n < a.size(); ++n) d += sq(a[n] - b[n]);
    return d;
}

struct GaussianFit {
    std::vector<double> mean, var;
    double weight = 0.0;
};

struct MixtureFit {
    GaussianFit comp[2];
    bool degenerate = false;
};

void fit_single(const std::vector<std::vector<double>>& samples, double var_floor,
                std::vector<double>& mean, std::vector<double>& var) {
    const size_t dim = samples.front().size();
    mean.assign(dim, 0.0);
    var.assign(dim, 0.0);
    for (const auto& s : samples)
        for (size_t d = 0; d < dim; ++d) mean[d] += s[d];
    for (double& m : mean) m /= double(samples.size());
    for (const auto& s : samples)
        for (size_t d = 0; d < dim; ++d) var[d] += sq(s[d] - mean[d]);
    for (double& v : var) v = std::max(v / double(samples.size()), var_floor);
}

// Two-component diagonal EM. Seeds are farthest-point picks (the sample
// furthest from the global mean, then the sample furthest from the first
// seed), which keeps training free of random state.
MixtureFit fit_mixture(const std::vector<std::vector<double>>& samples, const SegParams& p) {
    const size_t count = samples.size();
    const size_t dim = samples.front().size();
    MixtureFit fit;

    std::vector<double> gmean;
    std::vector<double> gvar;
    fit_single(samples, p.var_floor, gmean, gvar);

    size_t seed_a = 0;
    double best = -1.0;
    for (size_t n = 0; n < count; ++n) {
        const double d = distance2(samples[n], gmean);
        if (d > best) {
            best = d;
            seed_a = n;
        }
    }
    size_t seed_b = 0;
    best = -1.0;
    for (size_t n = 0; n < count; ++n) {
        const double d = distance2(samples[n], samples[seed_a]);
        if (d > best) {
            best = d;
            seed_b = n;
        }
    }

    // Hard assignment to the nearest seed; equidistant samples split evenly.
    std::vector<double> resp(count, 0.5);
    for (size_t n = 0; n < count; ++n) {
        const double da = distance2(samples[n], samples[seed_a]);
        const double db = distance2(samples[n], samples[seed_b]);
        if (da < db)
            resp[n] = 1.0;
        else if (db < da)
            resp[n] = 0.0;
    }

    auto m_step = [&]() -> bool {
        double wa = 0.0;
        for (double r : resp) wa += r;
        const double wb = double(count) - wa;
        if (wa < 1e-9 || wb < 1e-9) return false;
        for (int c = 0; c < 2; ++c) {
            GaussianFit& g = fit.comp[c];
            const double total = (c == 0) ? wa : wb;
            g.weight = total / double(count);
            g.mean.assign(dim, 0.0);
            g.var.assign(dim, 0.0);
            for (size_t n = 0; n < count; ++n) {
                const double r = (c == 0) ? resp[n] : 1.0 - resp[n];
                for (size_t d = 0; d < dim; ++d) g.mean[d] += r * samples[n][d];
            }
            for (double& m : g.mean) m /= total;
            for (size_t n = 0; n < count; ++n) {
                const double r = (c == 0) ? resp[n] : 1.0 - resp[n];
                for (size_t d = 0; d < dim; ++d) g.var[d] += r * sq(samples[n][d] - g.mean[d]);
            }
            for (double& v : g.var) v = std::max(v / total, p.var_floor);
        }
        return true;
    };

    if (!m_step()) {
        fit.degenerate = true;
        return fit;
    }

    auto log_density = [&](int c, const std::vector<double>& s) {
        const GaussianFit& g = fit.comp[c];
        double lp = std::log(g.weight);
        for (size_t d = 0; d < dim; ++d)
            lp -= 0.5 * (sq(s[d] - g.mean[d]) / g.var[d] +
                         std::log(2.0 * std::numbers::pi * g.var[d]));
        return lp;
    };

    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < p.em_max_iters; ++iter) {
        double ll = 0.0;
        for (size_t n = 0; n < count; ++n) {
            const double la = log_density(0, samples[n]);
            const double lb = log_density(1, samples[n]);
            const double hi = std::max(la, lb);
            const double denom = std::exp(la - hi) + std::exp(lb - hi);
            resp[n] = std::exp(la - hi) / denom;
            ll += hi + std::log(denom);
        }
        if (!m_step()) {
            fit.degenerate = true;
            return fit;
        }
        if (!std::isfinite(ll)) {
            fit.degenerate = true;
            return fit;
        }
        if (iter > 0 && std::abs(ll - prev_ll) < p.em_tol * (std::abs(prev_ll) + 1e-12)) break;
        prev_ll = ll;
    }
    return fit;
}

std::vector<double> location_descriptor(const Frame& frame, int x, int y, const SegParams& p) {
    const Label label = extract_block(frame, x, y, p.block_size);
    return block_descriptor(label, p.descriptor_dim).coeffs;
}

// --- little-endian model file helpers ---------------------------------------

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int n = 0; n < 8; ++n) b[n] = static_cast<unsigned char>(bits >> (8 * n));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int n = 0; n < 8; ++n) bits |= std::uint64_t(b[n]) << (8 * n);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace

BackgroundModel train_model(const FrameSequence& seq, const SegParams& params) {
    if (seq.count() < 2) fail_data("need at least 2 frames to train");
    SegParams p = params;
    if (p.th_mahal <= 0.0)
        p.th_mahal = mahal_threshold_for(p.descriptor_dim * seq.channels());

    BackgroundModel model;
    model.params = p;
    model.frame_width = seq.width();
    model.frame_height = seq.height();
    model.channels = seq.channels();
    model.xs = overlap_origins(seq.width(), p.block_size, p.step);
    model.ys = overlap_origins(seq.height(), p.block_size, p.step);
    model.grid = Grid<BlockModel>(int(model.xs.size()), int(model.ys.size()));

    std::vector<std::vector<double>> samples(size_t(seq.count()));
    for (int yi = 0; yi < int(model.ys.size()); ++yi) {
        for (int xi = 0; xi < int(model.xs.size()); ++xi) {
            for (int f = 0; f < seq.count(); ++f)
                samples[size_t(f)] =
                    location_descriptor(seq.frames[size_t(f)], model.xs[size_t(xi)],
                                        model.ys[size_t(yi)], p);

            BlockModel bm;
            const MixtureFit fit = fit_mixture(samples, p);
            if (!fit.degenerate &&
                std::abs(fit.comp[0].weight - fit.comp[1].weight) > 0.5) {
                const GaussianFit& dom =
                    fit.comp[0].weight >= fit.comp[1].weight ? fit.comp[0] : fit.comp[1];
                bm.mean = dom.mean;
                bm.var = dom.var;
                bm.trained_on = int(std::lround(dom.weight * double(seq.count())));
            } else {
                fit_single(samples, p.var_floor, bm.mean, bm.var);
                bm.trained_on = seq.count();
                bm.refit_single = fit.degenerate;
            }
            model.grid.at(xi, yi) = std::move(bm);
        }
    }
    return model;
}

void apply_mrf_means(BackgroundModel& model, const Frame& bg) {
    const int n = model.params.block_size;
    const int cropped_w = (model.frame_width / n) * n;
    const int cropped_h = (model.frame_height / n) * n;
    if (bg.width != cropped_w || bg.height != cropped_h || bg.channels != model.channels)
        fail_data("model/background mismatch");

    for (int yi = 0; yi < model.grid.height(); ++yi)
        for (int xi = 0; xi < model.grid.width(); ++xi) {
            const int x = model.xs[size_t(xi)], y = model.ys[size_t(yi)];
            if (x + n > bg.width || y + n > bg.height) continue;
            model.grid.at(xi, yi).mean = location_descriptor(bg, x, y, model.params);
        }
}

BlockDecision classify_block(const BlockModel& model, const std::vector<double>& desc,
                             const SegState::Slot& prev, const SegParams& params) {
    if (desc.size() != model.mean.size()) fail_data("descriptor/model dimension mismatch");

    double mahal = 0.0;
    for (size_t d = 0; d < desc.size(); ++d)
        mahal += sq(desc[d] - model.mean[d]) / model.var[d];
    if (mahal <= params.th_mahal) return BlockDecision::background_gaussian;

    double dot = 0.0, nd = 0.0, nm = 0.0;
    for (size_t d = 0; d < desc.size(); ++d) {
        dot += desc[d] * model.mean[d];
        nd += sq(desc[d]);
        nm += sq(model.mean[d]);
    }
    if (nd > 0.0 && nm > 0.0) {
        const double cos_dist = 1.0 - dot / (std::sqrt(nd) * std::sqrt(nm));
        if (cos_dist <= params.th_cos) return BlockDecision::background_cosine;
    }

    if (prev.valid && prev.was_background) {
        double diff = 0.0;
        for (size_t d = 0; d < desc.size(); ++d) diff += std::abs(desc[d] - prev.desc[d]);
        if (diff / double(desc.size()) <= params.th_temporal)
            return BlockDecision::background_temporal;
    }
    return BlockDecision::foreground;
}

Mask generate_mask(const std::vector<int>& xs, const std::vector<int>& ys,
                   const Grid<BlockDecision>& decisions, int block_size, int width, int height,
                   double vote_threshold) {
    Grid<int> cover(width, height, 0);
    Grid<int> votes(width, height, 0);
    for (int yi = 0; yi < int(ys.size()); ++yi)
        for (int xi = 0; xi < int(xs.size()); ++xi) {
            const bool fg = !is_background(decisions.at(xi, yi));
            for (int y = ys[size_t(yi)]; y < ys[size_t(yi)] + block_size; ++y)
                for (int x = xs[size_t(xi)]; x < xs[size_t(xi)] + block_size; ++x) {
                    cover.at(x, y) += 1;
                    if (fg) votes.at(x, y) += 1;
                }
        }
    Mask mask(width, height, 1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            if (cover.at(x, y) == 0) fail_data("pixel not covered by any block");
            const double ratio = double(votes.at(x, y)) / double(cover.at(x, y));
            mask.at(x, y) = ratio >= vote_threshold ? 255 : 0;
        }
    return mask;
}

SegmentResult segment(const BackgroundModel& model, const Frame& frame, const SegState& state) {
    if (frame.width != model.frame_width || frame.height != model.frame_height ||
        frame.channels != model.channels)
        fail_data("model/frame mismatch");

    const int gw = model.grid.width(), gh = model.grid.height();
    SegmentResult result;
    result.decisions = Grid<BlockDecision>(gw, gh, BlockDecision::foreground);
    result.state.slots = Grid<SegState::Slot>(gw, gh);

    const bool have_prev = state.slots.width() == gw && state.slots.height() == gh;
    static const SegState::Slot empty_slot;

    for (int yi = 0; yi < gh; ++yi)
        for (int xi = 0; xi < gw; ++xi) {
            const std::vector<double> desc = location_descriptor(
                frame, model.xs[size_t(xi)], model.ys[size_t(yi)], model.params);
            const SegState::Slot& prev = have_prev ? state.slots.at(xi, yi) : empty_slot;
            const BlockDecision decision =
                classify_block(model.grid.at(xi, yi), desc, prev, model.params);
            result.decisions.at(xi, yi) = decision;
            result.state.slots.at(xi, yi) = {desc, true, is_background(decision)};
        }

    result.mask = generate_mask(model.xs, model.ys, result.decisions, model.params.block_size,
                                frame.width, frame.height, model.params.vote_threshold);
    return result;
}

bool check_reinit(const std::vector<double>& fg_fractions, double fraction, int consecutive) {
    if (int(fg_fractions.size()) < consecutive) return false;
    for (int k = 0; k < consecutive; ++k)
        if (fg_fractions[fg_fractions.size() - 1 - size_t(k)] <= fraction) return false;
    return true;
}

double foreground_fraction(const Mask& mask) {
    size_t fg = 0;
    for (std::uint8_t v : mask.data)
        if (v == 255) ++fg;
    return mask.data.empty() ? 0.0 : double(fg) / double(mask.data.size());
}

void save_model(const BackgroundModel& model, const std::filesystem::path& path) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) fail_data("cannot open for writing: " + path.string());
        out.write("BGM1", 4);
        put_u32(out, std::uint32_t(model.params.block_size));
        put_u32(out, std::uint32_t(model.params.step));
        put_u32(out, std::uint32_t(model.params.descriptor_dim));
        put_u32(out, std::uint32_t(model.channels));
        put_u32(out, std::uint32_t(model.grid.width()));
        put_u32(out, std::uint32_t(model.grid.height()));
        put_u32(out, std::uint32_t(model.frame_width));
        put_u32(out, std::uint32_t(model.frame_height));
        put_f64(out, model.params.th_mahal);
        put_f64(out, model.params.th_cos);
        put_f64(out, model.params.th_temporal);
        for (const BlockModel& bm : model.grid) {
            for (double v : bm.mean) put_f64(out, v);
            for (double v : bm.var) put_f64(out, v);
        }
        if (!out) fail_data("write failed: " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

BackgroundModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("cannot open model file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "BGM1", 4) != 0)
        fail_data("bad model file (magic mismatch): " + path.string());

    BackgroundModel model;
    model.params.block_size = int(get_u32(in));
    model.params.step = int(get_u32(in));
    model.params.descriptor_dim = int(get_u32(in));
    model.channels = int(get_u32(in));
    const int gw = int(get_u32(in));
    const int gh = int(get_u32(in));
    model.frame_width = int(get_u32(in));
    model.frame_height = int(get_u32(in));
    model.params.th_mahal = get_f64(in);
    model.params.th_cos = get_f64(in);
    model.params.th_temporal = get_f64(in);
    if (!in) fail_data("truncated model file: " + path.string());

    model.xs = overlap_origins(model.frame_width, model.params.block_size, model.params.step);
    model.ys = overlap_origins(model.frame_height, model.params.block_size, model.params.step);
    if (int(model.xs.size()) != gw || int(model.ys.size()) != gh)
        fail_data("inconsistent model geometry: " + path.string());

    model.grid = Grid<BlockModel>(gw, gh);
    const size_t dim = size_t(model.params.descriptor_dim) * model.channels;
    for (BlockModel& bm : model.grid) {
        bm.mean.resize(dim);
        bm.var.resize(dim);
        for (double& v : bm.mean) v = get_f64(in);
        for (double& v : bm.var) v = get_f64(in);
        bm.trained_on = 1;  // loaded models do not carry sample counts
    }
    if (!in) fail_data("truncated model file: " + path.string());
    return model;
}

} // namespace bgmrf

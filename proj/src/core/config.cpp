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

#include "core/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace bgmrf {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (...) {
        fail_usage("config: bad value '" + value + "' for " + key);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) fail_usage("config: expected integer for " + key);
    return int(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on") return true;
    if (value == "0" || value == "false" || value == "off") return false;
    fail_usage("config: expected boolean for " + key);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

} // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (key == "block_size") {
        block_size = parse_int(key, value);
        if (block_size < 2) fail_usage("config: block_size must be >= 2");
        if (!step_explicit) step = std::max(1, block_size / 2);
    } else if (key == "step") {
        step = parse_int(key, value);
        step_explicit = true;
        if (step < 1) fail_usage("config: step must be >= 1");
    } else if (key == "descriptor_dim") {
        descriptor_dim = parse_int(key, value);
        if (descriptor_dim < 1) fail_usage("config: descriptor_dim must be >= 1");
    } else if (key == "t1") {
        t1 = parse_double(key, value);
        if (t1 < -1.0 || t1 > 1.0) fail_usage("config: t1 must be in [-1, 1]");
    } else if (key == "t2") {
        t2 = parse_double(key, value);
        if (t2 < 0.0) fail_usage("config: t2 must be >= 0");
    } else if (key == "sigma_floor") {
        sigma_floor = parse_double(key, value);
        if (sigma_floor < 0.0) fail_usage("config: sigma_floor must be >= 0");
    } else if (key == "f_min") {
        f_min = parse_int(key, value);
        if (f_min < 2 || f_min > 5) fail_usage("config: f_min must be in [2, 5]");
    } else if (key == "w_max") {
        w_max = parse_int(key, value);
        if (w_max < 1) fail_usage("config: w_max must be >= 1");
    } else if (key == "temperature") {
        temperature = parse_double(key, value);
        if (temperature <= 0.0) fail_usage("config: temperature must be > 0");
    } else if (key == "eta") {
        eta = parse_double(key, value);
        if (eta < 0.0) fail_usage("config: eta must be >= 0");
    } else if (key == "max_iters") {
        max_iters = parse_int(key, value);
        if (max_iters < 1) fail_usage("config: max_iters must be >= 1");
    } else if (key == "frames") {
        frames = parse_int(key, value);
        if (frames < 0) fail_usage("config: frames must be >= 0");
    } else if (key == "seed") {
        seed = std::uint64_t(parse_double(key, value));
    } else if (key == "th_mahal") {
        th_mahal = value == "auto" ? 0.0 : parse_double(key, value);
    } else if (key == "th_cos") {
        th_cos = parse_double(key, value);
        if (th_cos < 0.0) fail_usage("config: th_cos must be >= 0");
    } else if (key == "th_temporal") {
        th_temporal = value == "auto" ? -1.0 : parse_double(key, value);
    } else if (key == "var_floor") {
        var_floor = parse_double(key, value);
        if (var_floor <= 0.0) fail_usage("config: var_floor must be > 0");
    } else if (key == "em_max_iters") {
        em_max_iters = parse_int(key, value);
        if (em_max_iters < 1) fail_usage("config: em_max_iters must be >= 1");
    } else if (key == "em_tol") {
        em_tol = parse_double(key, value);
        if (em_tol <= 0.0) fail_usage("config: em_tol must be > 0");
    } else if (key == "vote_threshold") {
        vote_threshold = parse_double(key, value);
        if (vote_threshold < 0.0 || vote_threshold > 1.0)
            fail_usage("config: vote_threshold must be in [0, 1]");
    } else if (key == "reinit") {
        reinit = parse_bool(key, value);
    } else if (key == "reinit_fraction") {
        reinit_fraction = parse_double(key, value);
        if (reinit_fraction < 0.0 || reinit_fraction > 1.0)
            fail_usage("config: reinit_fraction must be in [0, 1]");
    } else if (key == "reinit_consecutive") {
        reinit_consecutive = parse_int(key, value);
        if (reinit_consecutive < 1) fail_usage("config: reinit_consecutive must be >= 1");
    } else if (key == "snapshot_dir") {
        snapshot_dir = value;
    } else if (key == "pattern") {
        pattern = value;
    } else {
        fail_usage("config: unknown key '" + key + "'");
    }
}

void Config::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail_data("cannot open config file: " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_usage("config: expected key=value at " + path.string() + ":" +
                       std::to_string(line_no));
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void Config::finalize() const {
    if (step > block_size) fail_usage("config: step must not exceed block_size");
    if (descriptor_dim > block_size * block_size)
        fail_usage("config: descriptor_dim must not exceed block_size^2");
}

std::string Config::echo() const {
    std::ostringstream out;
    out << "block_size=" << block_size << "\n"
        << "step=" << step << "\n"
        << "descriptor_dim=" << descriptor_dim << "\n"
        << "t1=" << t1 << "\n"
        << "t2=" << t2 << "\n"
        << "sigma_floor=" << sigma_floor << "\n"
        << "f_min=" << f_min << "\n"
        << "w_max=" << w_max << "\n"
        << "temperature=" << temperature << "\n"
        << "eta=" << eta << "\n"
        << "max_iters=" << max_iters << "\n"
        << "frames=" << frames << "\n"
        << "seed=" << seed << "\n"
        << "th_mahal=" << (th_mahal <= 0.0 ? std::string("auto") : std::to_string(th_mahal))
        << "\n"
        << "th_cos=" << th_cos << "\n"
        << "th_temporal="
        << (th_temporal < 0.0 ? std::string("auto") : std::to_string(th_temporal)) << "\n"
        << "var_floor=" << var_floor << "\n"
        << "em_max_iters=" << em_max_iters << "\n"
        << "em_tol=" << em_tol << "\n"
        << "vote_threshold=" << vote_threshold << "\n"
        << "reinit=" << (reinit ? 1 : 0) << "\n"
        << "reinit_fraction=" << reinit_fraction << "\n"
        << "reinit_consecutive=" << reinit_consecutive << "\n"
        << "snapshot_dir=" << snapshot_dir << "\n"
        << "pattern=" << pattern << "\n";
    return out.str();
}

std::string Config::get(const std::string& key) const {
    const std::string dump = echo();
    const std::string prefix = key + "=";
    size_t pos = 0;
    while (pos < dump.size()) {
        size_t end = dump.find('\n', pos);
        if (end == std::string::npos) end = dump.size();
        const std::string line = dump.substr(pos, end - pos);
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
        pos = end + 1;
    }
    fail_usage("config: unknown key '" + key + "'");
}

} // namespace bgmrf

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

// Drives the installed command-line binary: exit-code contract (0 success,
// 1 usage, 2 data), config echo, frame caps, and the snapshot hook.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path temp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("bgmrf_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run(const std::string& args) {
    const auto dir = temp_dir("io");
    const auto out = dir / "out.txt";
    const auto err = dir / "err.txt";
    const std::string cmd = std::string(BGMRF_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

const char* kScene =
    "width=64\nheight=64\nchannels=1\nframes=30\nseed=3\nnoise=0\n"
    "background=waves:100,26,32,24,24\n"
    "object=rect=16x16; texture=invert; park=32,32; visible=4-27\n";

fs::path make_scene(const std::string& name) {
    const auto dir = temp_dir(name);
    std::ofstream(dir / "scene.txt") << kScene;
    RunResult r = run("synth --in " + (dir / "scene.txt").string() + " --out " +
                      (dir / "scene").string());
    REQUIRE(r.exit_code == 0);
    return dir;
}

} // namespace

TEST_CASE("missing inputs exit with the data code and explain on stderr") {
    const RunResult r = run("estimate-bg --in /no/such/dir --out /tmp/never.png");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("usage problems exit with the usage code") {
    CHECK(run("estimate-bg --definitely-not-a-flag").exit_code == 1);
    CHECK(run("nonsense-subcommand").exit_code == 1);
    const auto dir = make_scene("usage");
    CHECK(run("estimate-bg --in " + (dir / "scene" / "frames").string() +
              " --out /tmp/x.png --set no_such_key=1")
              .exit_code == 1);
    CHECK(run("estimate-bg --in " + (dir / "scene" / "frames").string() +
              " --out /tmp/x.png --set f_min=99")
              .exit_code == 1);
}

TEST_CASE("every run echoes the resolved configuration") {
    const auto dir = make_scene("echo");
    const RunResult r = run("estimate-bg --in " + (dir / "scene" / "frames").string() +
                            " --out " + (dir / "bg.png").string() + " --set t2=4.5");
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("resolved configuration:") != std::string::npos);
    CHECK(r.err.find("t2=4.5") != std::string::npos);
    CHECK(r.err.find("block_size=16") != std::string::npos);
}

TEST_CASE("the frame cap truncates reads before decoding later files") {
    const auto dir = make_scene("cap");
    // Corrupt a late frame: capped runs never touch it, full runs fail.
    std::ofstream(dir / "scene" / "frames" / "frame_000025.pgm", std::ios::trunc)
        << "garbage bytes";
    const std::string frames = (dir / "scene" / "frames").string();
    CHECK(run("estimate-bg --in " + frames + " --out " + (dir / "bg.png").string() +
              " --frames 20")
              .exit_code == 0);
    const RunResult full = run("estimate-bg --in " + frames + " --out " +
                               (dir / "bg2.png").string() + " --frames 0");
    CHECK(full.exit_code == 2);
    CHECK(full.err.find("frame_000025.pgm") != std::string::npos);
}

TEST_CASE("config file values load and flags override them") {
    const auto dir = make_scene("cfgfile");
    std::ofstream(dir / "cfg.txt") << "frames=5\nt2=9\n";
    const RunResult r = run("estimate-bg --in " + (dir / "scene" / "frames").string() +
                            " --out " + (dir / "bg.png").string() + " --config " +
                            (dir / "cfg.txt").string() + " --frames 30");
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("t2=9") != std::string::npos);       // from the file
    CHECK(r.err.find("frames=30") != std::string::npos);  // flag wins
}

TEST_CASE("labeling snapshots are written when requested") {
    const auto dir = make_scene("snapshots");
    const RunResult r = run("estimate-bg --in " + (dir / "scene" / "frames").string() +
                            " --out " + (dir / "bg.png").string() + " --set snapshot_dir=" +
                            (dir / "snaps").string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "snaps" / "stage_000.png"));  // after seeding
    CHECK(fs::exists(dir / "snaps" / "stage_001.png"));  // after the fill pass
    int count = 0;
    for (const auto& entry : fs::directory_iterator(dir / "snaps")) (void)entry, ++count;
    CHECK(count >= 3);  // at least one refinement pass
}

TEST_CASE("eval in background mode reports exact recovery") {
    const auto dir = make_scene("evalbg");
    REQUIRE(run("estimate-bg --in " + (dir / "scene" / "frames").string() + " --out " +
                (dir / "bg.pgm").string() + " --frames 0")
                .exit_code == 0);
    const RunResult r = run("eval --pred " + (dir / "bg.pgm").string() + " --gt " +
                            (dir / "scene" / "gt_background.pgm").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("mismatched_pixels=0") != std::string::npos);
}

TEST_CASE("synth honours a seed override deterministically") {
    const auto dir = temp_dir("seeds");
    std::ofstream(dir / "scene.txt") << "width=32\nheight=32\nchannels=1\nframes=3\nseed=1\n"
                                        "noise=3\nbackground=waves:100,26,32,24,24\n";
    REQUIRE(run("synth --in " + (dir / "scene.txt").string() + " --out " + (dir / "a").string() +
                " --seed 42")
                .exit_code == 0);
    REQUIRE(run("synth --in " + (dir / "scene.txt").string() + " --out " + (dir / "b").string() +
                " --seed 42")
                .exit_code == 0);
    REQUIRE(run("synth --in " + (dir / "scene.txt").string() + " --out " + (dir / "c").string() +
                " --seed 43")
                .exit_code == 0);
    const std::string a = slurp(dir / "a" / "frames" / "frame_000001.pgm");
    const std::string b = slurp(dir / "b" / "frames" / "frame_000001.pgm");
    const std::string c = slurp(dir / "c" / "frames" / "frame_000001.pgm");
    CHECK(a == b);
    CHECK(a != c);
}

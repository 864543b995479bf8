// Copyright 2026 The handlabel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the command-line tool as a subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("handlabel_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  static const fs::path err_file = scratch("stderr") / "err.txt";
  const std::string cmd = std::string(HANDLABEL_CLI) + " " + args + " 2>" + err_file.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err_file);
  return r;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").status == 0);
  const Run none = run("frobnicate");
  CHECK(none.status == 1);
  CHECK(none.err.rfind("error: invalid_argument: ", 0) == 0);
}

TEST_CASE("backproject") {
  Run r = run("backproject --pixel 256 212 --depth 1 --fx 365 --fy 365 --cx 256 --cy 212");
  CHECK(r.status == 0);
  CHECK(r.out == "0 0 1.0\n");
  r = run("backproject --pixel 366 212 --depth 1 --fx 365 --fy 365 --cx 256 --cy 212");
  CHECK(r.out == "0.3013698630136986 0 1.0\n");

  const fs::path dir = scratch("bp");
  std::ofstream(dir / "k.json") << R"({"fx": 365, "fy": 365, "cx": 256, "cy": 212})";
  r = run("backproject --pixel 256 312 --depth 0.5 --intrinsics " + (dir / "k.json").string());
  CHECK(r.out == "0 0.136986301369863 0.5\n");

  r = run("backproject --pixel 1 1 --depth 1 --fx 365");
  CHECK(r.status == 1);
  r = run("backproject --pixel 1 1 --depth 1 --fx 1 --fy 1 --cx 0 --cy 0 --intrinsics " +
          (dir / "k.json").string());
  CHECK(r.status == 1);
  CHECK(r.err.find("exactly one") != std::string::npos);
  r = run("backproject --pixel 1 1 --depth 0 --fx 1 --fy 1 --cx 0 --cy 0");
  CHECK(r.status == 1);
  CHECK(r.err == "error: invalid_argument: back-projection needs depth > 0\n");
}

TEST_CASE("end-to-end labelling session") {
  const fs::path dir = scratch("flow");
  const std::string seq = (dir / "seq").string();
  const std::string gt = (dir / "gt.json").string();
  Run r = run("synth " + seq + " --gt " + gt + " --seed 3 --frames 10 --object-label 1");
  REQUIRE(r.status == 0);

  r = run("ingest-check " + seq);
  CHECK(r.status == 0);
  CHECK(r.out == "ok: 10 frames, 512x424, 0 with depth holes\n");

  const std::string labels = (dir / "labels.json").string();
  r = run("--jobs 2 label " + seq + " -o " + labels);
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(slurp(labels));
  CHECK(j["images"].size() == 10);

  r = run("seed-overlay " + seq + " -a " + labels + " -o " + (dir / "seed.png").string());
  CHECK(r.status == 0);
  CHECK(r.out == "instances: 1 2\n");
  CHECK(fs::exists(dir / "seed.png"));

  // The synthetic holder is on the left, so it is whichever first-frame
  // instance has the smaller x centroid.
  int holder = 0;
  double best_x = 1e9;
  int pos = 0;
  for (const auto& a : j["annotations"]) {
    if (a["image_id"] != 1) continue;
    ++pos;
    const double x = a["centroid_3d"][0].get<double>();
    if (x < best_x) {
      best_x = x;
      holder = pos;
    }
  }
  REQUIRE(holder > 0);

  const std::string labelled = (dir / "labelled.json").string();
  r = run("propagate -a " + labels + " --seed-instance " + std::to_string(holder) +
          " --object-label 1 -o " + labelled);
  REQUIRE(r.status == 0);
  const std::string results = (dir / "results.json").string();
  r = run("export -a " + labelled + " -o " + results + " --format results");
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(slurp(results)).is_array());

  const std::string report = (dir / "report.json").string();
  r = run("eval --gt " + gt + " --pred " + results + " --json " + report);
  REQUIRE(r.status == 0);
  const auto rep = nlohmann::json::parse(slurp(report));
  CHECK(rep["mode"] == "sensitive");
  CHECK(rep["AP50"].get<double>() >= 99.0);
  CHECK(r.out.find("AP50") != std::string::npos);
  CHECK(r.out.find("\"AP50\"") != std::string::npos);

  r = run("eval --mode agnostic --gt " + gt + " --pred " + labels);
  CHECK(r.status == 0);
  CHECK(r.out.find("\"agnostic\"") != std::string::npos);

  std::ofstream(dir / "regions.json") << R"({"regions": [{"name": "o", "points": [[0, 0, 0]]}]})";
  r = run("distances -a " + labels + " --sequence " + seq + " --regions " +
          (dir / "regions.json").string());
  CHECK(r.status == 0);
  CHECK(r.out.rfind("frame,instance,region,distance_m\n1,1,o,", 0) == 0);

  r = run("propagate -a " + labels + " --seed-instance 1 --object-label 7 -o " + labelled);
  CHECK(r.status == 1);
  CHECK(r.err == "error: invalid_argument: object label 7 not in 1..4\n");
  r = run("propagate -a " + labels + " --seed-instance 5 --object-label 1 -o " + labelled);
  CHECK(r.status == 7);
}

TEST_CASE("error codes reach the exit status") {
  const fs::path dir = scratch("errors");
  Run r = run("ingest-check " + (dir / "nothing").string());
  CHECK(r.status == 2);
  CHECK(r.err.rfind("error: io: ", 0) == 0);

  const std::string seq = (dir / "holes").string();
  REQUIRE(run("synth " + seq + " --frames 3 --gaps 0 --jumps 0 --holes 0.05").status == 0);
  CHECK(fs::exists(dir / "holes" / "ground_truth.json"));
  r = run("ingest-check " + seq);
  CHECK(r.out == "ok: 3 frames, 512x424, 3 with depth holes\n");
  r = run("label " + seq + " -o " + (dir / "l.json").string());
  CHECK(r.status == 5);
  CHECK(r.err.rfind("error: depth_holes: frame 1", 0) == 0);
  CHECK(run("label --inpaint " + seq + " -o " + (dir / "l.json").string()).status == 0);

  const std::string filled = (dir / "filled").string();
  CHECK(run("inpaint " + seq + " -o " + filled).status == 0);
  CHECK(run("ingest-check " + filled).out == "ok: 3 frames, 512x424, 0 with depth holes\n");

  std::ofstream(dir / "bad.toml") << "[chromakey]\nbogus = 1\n";
  r = run("--config " + (dir / "bad.toml").string() + " ingest-check " + filled);
  CHECK(r.status == 3);
}

TEST_CASE("synth is reproducible and in-painting a clean sequence is a no-op") {
  const fs::path dir = scratch("repro");
  const std::string a = (dir / "a").string(), b = (dir / "b").string();
  REQUIRE(run("synth " + a + " --seed 11 --frames 6").status == 0);
  REQUIRE(run("synth " + b + " --seed 11 --frames 6").status == 0);
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    CHECK(slurp(e.path()) == slurp(fs::path(b) / rel));
    ++files;
  }
  CHECK(files == 2 * 6 + 3);  // frames, manifest, intrinsics, ground truth

  const std::string c = (dir / "c").string();
  REQUIRE(run("inpaint " + a + " -o " + c).status == 0);
  for (int i = 1; i <= 6; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "frames/frame_%06d.depth.png", i);
    CHECK(slurp(fs::path(a) / name) == slurp(fs::path(c) / name));
  }
}

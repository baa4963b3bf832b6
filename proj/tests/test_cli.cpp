// Copyright 2026 The mie authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests driving the installed `mie` binary as a subprocess:
// synth -> enhance -> detect -> eval on a committed fixture scene, plus the
// exit-code and error-reporting contract.

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <doctest.h>

#include "mie/image_io.hpp"
#include "mie/manifest.hpp"
#include "mie/synth.hpp"
#include "test_support.hpp"

#ifndef MIE_TOOL_PATH
#error "MIE_TOOL_PATH must point at the mie binary"
#endif
#ifndef MIE_TEST_FIXTURES
#error "MIE_TEST_FIXTURES must point at the fixtures directory"
#endif

namespace mie {
namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the tool with `args`, capturing exit code, stdout and stderr.
RunResult run_tool(const test::TempDir& dir, const std::string& args) {
  static int invocation = 0;
  const std::string tag = std::to_string(invocation++);
  const std::filesystem::path out_path = dir / ("stdout_" + tag + ".txt");
  const std::filesystem::path err_path = dir / ("stderr_" + tag + ".txt");
  const std::string command = std::string("\"") + MIE_TOOL_PATH + "\" " + args + " > \"" +
                              out_path.string() + "\" 2> \"" + err_path.string() + "\"";
  const int status = std::system(command.c_str());

  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = test::read_text(out_path);
  result.err = test::read_text(err_path);
  return result;
}

std::string quoted(const std::filesystem::path& path) { return "\"" + path.string() + "\""; }

/// The f1 column of the named row in an eval CSV, or -1 if absent.
double csv_f1(const std::string& csv, const std::string& row) {
  std::size_t at = csv.find("\n" + row + ",");
  if (at == std::string::npos) return -1.0;
  at += 1 + row.size() + 1;
  // Columns: site,recall,precision,f1,...
  for (int skip = 0; skip < 2; ++skip) at = csv.find(',', at) + 1;
  return std::stod(csv.substr(at));
}

std::size_t count_files(const std::filesystem::path& dir, const std::string& extension) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == extension) ++count;
  }
  return count;
}

TEST_SUITE("cli") {
  TEST_CASE("version and help follow the usual conventions") {
    test::TempDir dir;
    const RunResult version = run_tool(dir, "--version");
    CHECK(version.exit_code == 0);
    CHECK(version.out.find("mie 0.1.0") != std::string::npos);

    const RunResult help = run_tool(dir, "--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("enhance") != std::string::npos);
    CHECK(help.out.find("abundance") != std::string::npos);
  }

  TEST_CASE("usage errors exit 2 with a machine-readable line") {
    test::TempDir dir;
    const RunResult missing = run_tool(dir, "detect");
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("\"error\":\"UsageError\"") != std::string::npos);

    const RunResult unknown = run_tool(dir, "frobnicate");
    CHECK(unknown.exit_code == 2);
  }

  TEST_CASE("pipeline errors exit 1 with the error name on stderr") {
    test::TempDir dir;
    const std::filesystem::path empty = dir / "empty";
    std::filesystem::create_directories(empty);
    const RunResult result =
        run_tool(dir, "enhance --in " + quoted(empty) + " --out " + quoted(dir / "out"));
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("\"error\":\"EmptySequence\"") != std::string::npos);
  }

  TEST_CASE("a broken frame fails that frame but not the batch") {
    test::TempDir dir;
    SynthConfig cfg;
    cfg.width = 64;
    cfg.height = 48;
    cfg.frame_count = 3;
    const SynthResult dataset = write_dataset(cfg, dir / "data");

    // Point the middle frame at a path that does not exist.
    SequenceManifest manifest;
    manifest.site_id = cfg.site_id;
    manifest.plant = cfg.plant;
    manifest.frames = dataset.records;
    manifest.frames[1].path = dir / "data" / "missing.png";
    const std::filesystem::path manifest_path = dir / "broken.csv";
    write_manifest_csv(std::span(&manifest, 1), manifest_path);

    const std::filesystem::path out = dir / "enhanced";
    const RunResult result =
        run_tool(dir, "enhance --manifest " + quoted(manifest_path) + " --out " + quoted(out));
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("\"error\":\"PartialFailure\"") != std::string::npos);
    CHECK(result.err.find("failed:") != std::string::npos);
    // The two loadable frames still came through.
    CHECK(std::filesystem::exists(out / "frame_000000.png"));
    CHECK(std::filesystem::exists(out / "frame_000002.png"));
    CHECK(count_files(out, ".png") == 2);
  }

  TEST_CASE("the full pipeline recovers the fixture's insects") {
    test::TempDir dir;
    const std::filesystem::path scene =
        std::filesystem::path(MIE_TEST_FIXTURES) / "blob_easy.cfg";
    REQUIRE(std::filesystem::exists(scene));

    // synth: render the scene with its ground truth.
    const std::filesystem::path data = dir / "data";
    const RunResult synth =
        run_tool(dir, "synth --config " + quoted(scene) + " --out " + quoted(data));
    REQUIRE(synth.exit_code == 0);
    REQUIRE(std::filesystem::exists(data / "manifest.csv"));
    const std::size_t frame_count = count_files(data, ".png");
    REQUIRE(frame_count >= 8);

    // enhance: once single-threaded, once with workers; identical bytes.
    const std::filesystem::path enhanced = dir / "enhanced";
    const RunResult enhance_run =
        run_tool(dir, "enhance --manifest " + quoted(data / "manifest.csv") + " --out " +
                          quoted(enhanced) + " --workers 1");
    REQUIRE(enhance_run.exit_code == 0);
    REQUIRE(count_files(enhanced, ".png") == frame_count);

    const std::filesystem::path threaded = dir / "enhanced_mt";
    const RunResult threaded_run =
        run_tool(dir, "enhance --manifest " + quoted(data / "manifest.csv") + " --out " +
                          quoted(threaded) + " --workers 3");
    REQUIRE(threaded_run.exit_code == 0);
    for (const auto& entry : std::filesystem::directory_iterator(enhanced)) {
      if (entry.path().extension() != ".png") continue;
      CHECK(read_file(entry.path()) == read_file(threaded / entry.path().filename()));
    }

    // detect: enhanced frames, thresholds tuned for the fixture's contrast.
    const std::filesystem::path det = dir / "det";
    const RunResult detect_run =
        run_tool(dir, "detect --in " + quoted(enhanced) + " --out " + quoted(det) +
                          " --threshold 80 --min-area 25");
    REQUIRE(detect_run.exit_code == 0);
    REQUIRE(count_files(det, ".txt") == frame_count);

    // eval: detections against the synthetic truth next to the frames.
    const std::filesystem::path report_path = dir / "report.csv";
    const RunResult eval_run =
        run_tool(dir, "eval --manifest " + quoted(data / "manifest.csv") + " --det " +
                          quoted(det) + " --ann " + quoted(data) + " --out " +
                          quoted(report_path));
    REQUIRE(eval_run.exit_code == 0);
    const std::string report = test::read_text(report_path);
    CHECK(report.rfind("site,", 0) == 0);
    const double micro_f1 = csv_f1(report, "micro");
    CAPTURE(report);
    CHECK(micro_f1 >= 0.90);

    // abundance: series plus SVG render from the same detections.
    const RunResult abundance_run = run_tool(
        dir, "abundance --manifest " + quoted(data / "manifest.csv") + " --det " + quoted(det) +
                 " --window 120 --radius 40 --out " + quoted(dir / "abundance.csv") + " --svg " +
                 quoted(dir / "abundance.svg"));
    REQUIRE(abundance_run.exit_code == 0);
    CHECK(test::read_text(dir / "abundance.csv").rfind("bin_start,", 0) == 0);
    CHECK(test::read_text(dir / "abundance.svg").rfind("<svg", 0) == 0);

    // stats: manifest plus annotations, one row per site.
    const RunResult stats_run =
        run_tool(dir, "stats --manifest " + quoted(data / "manifest.csv") + " --ann " +
                          quoted(data) + " --out " + quoted(dir / "stats.csv"));
    REQUIRE(stats_run.exit_code == 0);
    const std::string stats = test::read_text(dir / "stats.csv");
    CHECK(stats.rfind("site,", 0) == 0);
    CHECK(stats.find("Average") != std::string::npos);
  }

  TEST_CASE("a config file supplies defaults the command line can override") {
    test::TempDir dir;
    test::write_text(dir / "scene.cfg",
                     "width = 64\n"
                     "height = 48\n"
                     "frame_count = 6\n"
                     "insect.0.radius = 4\n"
                     "insect.0.waypoints = 30,24\n");
    test::write_text(dir / "app.ini", "[synth]\nframes = 2\n");

    const std::string base = "--config " + quoted(dir / "app.ini") + " synth --config " +
                             quoted(dir / "scene.cfg");
    const RunResult from_ini = run_tool(dir, base + " --out " + quoted(dir / "ini2"));
    REQUIRE(from_ini.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "ini2" / "frame_000001.png"));
    CHECK_FALSE(std::filesystem::exists(dir / "ini2" / "frame_000002.png"));

    const RunResult overridden =
        run_tool(dir, base + " --frames 3 --out " + quoted(dir / "ini3"));
    REQUIRE(overridden.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "ini3" / "frame_000002.png"));
    CHECK_FALSE(std::filesystem::exists(dir / "ini3" / "frame_000003.png"));
  }
}

}  // namespace
}  // namespace mie

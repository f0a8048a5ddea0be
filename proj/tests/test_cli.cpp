// tests/test_cli.cpp
//
// Copyright 2026  The xlcrf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the installed binary end to end against the committed fixture.
// Every command runs with the fixture directory as working directory so the
// relative paths inside config.ini resolve.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
  std::string cmd = "cd " + std::string(XLCRF_FIXTURE_DIR) + " && " +
                    std::string(XLCRF_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  char buf[4096];
  size_t got;
  while ((got = ::fread(buf, 1, sizeof(buf), pipe)) > 0)
    result.output.append(buf, got);
  int rc = ::pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::string scratch_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() /
               ("xlcrf_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr const char* kLabels = "O,B-PER,I-PER,B-LOC,I-LOC";

}  // namespace

TEST_CASE("cli eval scores a file against itself perfectly") {
  CmdResult r = run_cli(std::string("eval --gold test.conll --pred test.conll") +
                        " --labels " + kLabels);
  INFO(r.output);
  CHECK(r.status == 0);
  CHECK(r.output.find("accuracy: 100.00%") != std::string::npos);
  CHECK(r.output.find("FB1: 100.00") != std::string::npos);
}

TEST_CASE("cli rejects bad invocations with exit code 2") {
  CHECK(run_cli("no-such-subcommand").status == 2);
  CHECK(run_cli("eval --gold test.conll --pred test.conll --labels O,B-PER "
                "--no-such-flag")
            .status == 2);
  CHECK(run_cli("eval --gold test.conll").status == 2);  // missing required
  CHECK(run_cli("--help").status == 0);
}

TEST_CASE("cli reports runtime failures with exit code 1") {
  CmdResult r = run_cli(std::string("eval --gold absent.conll") +
                        " --pred test.conll --labels " + kLabels);
  CHECK(r.status == 1);
  CHECK(r.output.find("absent.conll") != std::string::npos);
}

TEST_CASE("cli bootstrap of a system against itself prints p_value=1") {
  CmdResult r = run_cli(std::string("bootstrap --gold test.conll") +
                        " --pred-a test.conll --pred-b test.conll --labels " +
                        kLabels + " --iterations 200 --seed 7");
  INFO(r.output);
  CHECK(r.status == 0);
  CHECK(r.output.find("p_value=1") != std::string::npos);
}

TEST_CASE("cli pipeline produces its artifacts deterministically") {
  std::string dir_a = scratch_dir("pipe_a");
  std::string dir_b = scratch_dir("pipe_b");
  std::string flags =
      " --regime ge --max-iterations 10 --patience 5 --convergence-tol 0";

  CmdResult a = run_cli("pipeline --config config.ini --output-dir " + dir_a +
                        flags);
  INFO(a.output);
  REQUIRE(a.status == 0);
  for (const char* name :
       {"source_model.txt", "posteriors.tsv", "expectations.tsv", "model.txt",
        "train_report.txt", "score_report.txt", "test_pred.conll"}) {
    INFO(name);
    CHECK(fs::exists(fs::path(dir_a) / name));
  }
  CHECK(a.output.find("FB1") != std::string::npos);

  CmdResult b = run_cli("pipeline --config config.ini --output-dir " + dir_b +
                        flags);
  REQUIRE(b.status == 0);
  for (const char* name : {"model.txt", "train_report.txt", "score_report.txt",
                           "test_pred.conll", "expectations.tsv"}) {
    INFO(name);
    CHECK(slurp((fs::path(dir_a) / name).string()) ==
          slurp((fs::path(dir_b) / name).string()));
  }

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("cli train runs the supervised regime from a config") {
  std::string dir = scratch_dir("train_sup");
  std::string model_out = dir + "/model.txt";
  std::string report_out = dir + "/report.txt";
  CmdResult r = run_cli("train --config config.ini --regime supervised" +
                        std::string(" --max-iterations 8 --patience 4") +
                        " --model-out " + model_out + " --report-out " +
                        report_out);
  INFO(r.output);
  CHECK(r.status == 0);
  CHECK(fs::exists(model_out));
  CHECK(fs::exists(report_out));
  std::string report = slurp(report_out);
  CHECK(report.find("regime") != std::string::npos);
  CHECK(report.find("final_objective") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli learning-curve rejects an oversized split before writing") {
  std::string dir = scratch_dir("curve_bad");
  std::string out = dir + "/curve.csv";
  CmdResult r = run_cli(
      "learning-curve --config config.ini --sizes 0,10,100000"
      " --regimes supervised --out " + out);
  INFO(r.output);
  CHECK(r.status == 1);
  CHECK(r.output.find("out of range") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
  fs::remove_all(dir);
}

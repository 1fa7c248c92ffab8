// Copyright 2026 The rtv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

#ifdef RTVMON_PATH

const std::string kStudyCase = RTV_SOURCE_DIR "/descriptors/detector_fp.descriptor";
const std::string kFixtures = RTV_SOURCE_DIR "/tests/fixtures/";

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("rtvmon_cli_" + std::string(info->name()) + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + RTVMON_PATH + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

TEST_F(Cli, MissingDescriptorIsParseError) {
  const Result r = run("run --descriptor " + (dir_ / "nope.descriptor").string() + " --out " +
                       (dir_ / "out").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrorExitsTwo) {
  EXPECT_EQ(run("run --out x").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("run --descriptor " + kStudyCase + " --out " + (dir_ / "o").string() +
                " --z-mode sideways")
                .exit_code,
            2);
}

TEST_F(Cli, RunWritesReport) {
  const fs::path out = dir_ / "run";
  const Result r = run("run --descriptor " + kStudyCase + " --out " + out.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  for (const char* name : {"steps.csv", "posterior.csv", "summary.json", "flagged.jsonl"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  const std::string steps = slurp(out / "steps.csv");
  EXPECT_EQ(steps.rfind("n,confidence,rate_estimate,status,reasons\n", 0), 0u);
  EXPECT_NE(r.out.find("first_stable_accept_n="), std::string::npos);
}

TEST_F(Cli, RunIsDeterministic) {
  const std::string common = "run --seed 9 --n-total 600 --n-false 5 --checkpoints 100,500 "
                             "--descriptor " + kStudyCase + " --out ";
  const int rc = run(common + (dir_ / "a").string()).exit_code;
  ASSERT_NE(rc, 2);
  ASSERT_EQ(run(common + (dir_ / "b").string()).exit_code, rc);
  for (const char* name : {"steps.csv", "posterior.csv", "summary.json", "flagged.jsonl"}) {
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  }
}

TEST_F(Cli, RunFromGeneratedScenarioMatchesInline) {
  const fs::path csv = dir_ / "stream.csv";
  ASSERT_EQ(run("generate --seed 4 --out " + csv.string()).exit_code, 0);
  ASSERT_EQ(run("run --scenario " + csv.string() + " --descriptor " + kStudyCase + " --out " +
                (dir_ / "file").string())
                .exit_code,
            0);
  ASSERT_EQ(run("run --seed 4 --descriptor " + kStudyCase + " --out " + (dir_ / "inline").string())
                .exit_code,
            0);
  EXPECT_EQ(slurp(dir_ / "file" / "steps.csv"), slurp(dir_ / "inline" / "steps.csv"));
}

TEST_F(Cli, RunEndingInViolationExitsOne) {
  // 300 detections cannot reach 99.99 % confidence.
  const Result r = run("run --n-total 300 --c1 0.9999 --descriptor " + kStudyCase + " --out " +
                       (dir_ / "v").string());
  EXPECT_EQ(r.exit_code, 1) << r.err;
}

TEST_F(Cli, OverridesApply) {
  const Result r = run("run --n-false 0 --sigma 1.0 --t-fp 0.05 --descriptor " + kStudyCase +
                       " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const std::string summary = slurp(dir_ / "o" / "summary.json");
  EXPECT_NE(summary.find("\"t_fp\": 0.05"), std::string::npos) << summary;
}

TEST_F(Cli, ShadowUnknownEstimator) {
  const Result r = run("shadow --descriptor-a " + kStudyCase + " --descriptor-b " + kFixtures +
                       "unknown_estimator.descriptor --out " + (dir_ / "s").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("UnknownEstimator"), std::string::npos) << r.err;
}

TEST_F(Cli, ShadowIdenticalHasNoDivergence) {
  const Result r = run("shadow --descriptor-a " + kStudyCase + " --descriptor-b " + kStudyCase +
                       " --out " + (dir_ / "s").string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(slurp(dir_ / "s" / "shadow_summary.json").find("\"divergent_steps\": 0"),
            std::string::npos);
  EXPECT_EQ(slurp(dir_ / "s" / "a" / "steps.csv"), slurp(dir_ / "s" / "b" / "steps.csv"));
}

TEST_F(Cli, ShadowDivergenceExitsOne) {
  const Result r = run("shadow --descriptor-a " + kStudyCase + " --descriptor-b " + kFixtures +
                       "detector_fp_c99.descriptor --out " + (dir_ / "s").string());
  EXPECT_EQ(r.exit_code, 1) << r.err;
}

TEST_F(Cli, ValidateDescriptor) {
  Result r = run("validate-descriptor " + kStudyCase);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "false_positive_rate: surrogate\n");
  r = run("validate-descriptor " + kFixtures + "direct_temperature.descriptor");
  EXPECT_EQ(r.out, "max_temperature: direct\n");
  r = run("validate-descriptor " + kFixtures + "not_observable.descriptor");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("NotObservable"), std::string::npos);
}

TEST_F(Cli, GenerateWritesCsv) {
  const fs::path csv = dir_ / "g.csv";
  const Result r = run("generate --n-total 50 --n-false 2 --trajectory arc --out " + csv.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("step,time,x,y,label,clean_x,clean_y\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 51);
}

#else

TEST(Cli, NotBuilt) { GTEST_SKIP() << "rtvmon was not built"; }

#endif

}  // namespace

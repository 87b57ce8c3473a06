// Copyright 2026 The fcm-stats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <string>

#include "fcm/ftns_io.h"

namespace fcm {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout followed by stderr
};

RunResult Fcmc(const std::string& args) {
  const std::string cmd = std::string(FCMC_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

double Field(const std::string& text, const std::string& line_prefix, const std::string& key) {
  const std::regex re(line_prefix + "[^\\n]*\\b" + key + "=([-+0-9.eE]+)");
  std::smatch m;
  if (!std::regex_search(text, m, re)) return NAN;
  return std::stod(m[1]);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fcmc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char kSmallShapes[] = "4x8x8,4x4x4,4x2x2,4x1x1";

TEST_F(CliTest, GenIsDeterministic) {
  const auto a = Fcmc("gen --preset darknet --frames 2 --seed 7 -o " + Path("a.ftns"));
  ASSERT_EQ(a.exit_code, 0) << a.out;
  EXPECT_NE(a.out.find("config: gen shapes=256x76x136,512x38x68,1024x19x34 frames=2 seed=7"),
            std::string::npos)
      << a.out;
  ASSERT_EQ(Fcmc("gen --preset darknet --frames 2 --seed 7 -o " + Path("b.ftns")).exit_code, 0);
  EXPECT_EQ(ReadFileBytes(Path("a.ftns")), ReadFileBytes(Path("b.ftns")));
  ASSERT_EQ(Fcmc("gen --preset darknet --frames 2 --seed 8 -o " + Path("c.ftns")).exit_code, 0);
  EXPECT_NE(ReadFileBytes(Path("a.ftns")), ReadFileBytes(Path("c.ftns")));
}

TEST_F(CliTest, EncodeInspectShowsStatsBytes) {
  ASSERT_EQ(Fcmc(std::string("gen --shapes ") + kSmallShapes + " --frames 64 -o " + Path("x.ftns")).exit_code, 0);
  const auto enc = Fcmc("encode -i " + Path("x.ftns") + " -o " + Path("x.fcms") +
                       " --mode full --refresh 32");
  ASSERT_EQ(enc.exit_code, 0) << enc.out;
  EXPECT_NE(enc.out.find("config: encode mode=full q=10 refresh=32 codec=raw"), std::string::npos);
  const auto ins = Fcmc("inspect " + Path("x.fcms"));
  ASSERT_EQ(ins.exit_code, 0) << ins.out;
  EXPECT_EQ(Field(ins.out, "accounting:", "stats_bytes"), 80.0);
  EXPECT_EQ(Field(ins.out, "accounting:", "minmax_bytes"), 0.0);
  EXPECT_NE(ins.out.find("stats 1 (coded frame 32)"), std::string::npos);
  EXPECT_EQ(Field(ins.out, "accounting:", "total_bytes"),
            static_cast<double>(fs::file_size(Path("x.fcms"))));
}

TEST_F(CliTest, DecodeWritesAllFrames) {
  ASSERT_EQ(Fcmc(std::string("gen --shapes ") + kSmallShapes + " --frames 5 -o " + Path("x.ftns")).exit_code, 0);
  ASSERT_EQ(Fcmc("encode -i " + Path("x.ftns") + " -o " + Path("x.fcms") + " --temporal --codec zdeflate").exit_code, 0);
  const auto dec = Fcmc("decode -i " + Path("x.fcms") + " -o " + Path("y.ftns"));
  ASSERT_EQ(dec.exit_code, 0) << dec.out;
  EXPECT_EQ(ReadFtnsFile(Path("y.ftns")).size(), 5u);
}

TEST_F(CliTest, RoundtripReportsSmallDrift) {
  ASSERT_EQ(Fcmc(std::string("gen --shapes ") + kSmallShapes + " --frames 3 --seed 2 -o " + Path("x.ftns")).exit_code, 0);
  const auto rt = Fcmc("roundtrip -i " + Path("x.ftns") + " --mode full --codec 0 --refresh 1");
  ASSERT_EQ(rt.exit_code, 0) << rt.out;
  EXPECT_LE(Field(rt.out, "fidelity overall:", "mean_drift_rel"), 1e-4) << rt.out;
  EXPECT_LE(Field(rt.out, "fidelity overall:", "std_drift_rel"), 1e-4) << rt.out;
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  ASSERT_EQ(Fcmc(std::string("gen --shapes ") + kSmallShapes + " --frames 2 -o " + Path("x.ftns")).exit_code, 0);
  {
    std::FILE* f = std::fopen(Path("enc.cfg").c_str(), "w");
    std::fputs("mode = simplified\nq = 8\n", f);
    std::fclose(f);
  }
  const auto enc = Fcmc("encode -i " + Path("x.ftns") + " -o " + Path("x.fcms") + " --config " +
                       Path("enc.cfg") + " --q 12");
  ASSERT_EQ(enc.exit_code, 0) << enc.out;
  EXPECT_NE(enc.out.find("config: encode mode=simplified q=12"), std::string::npos) << enc.out;
}

TEST_F(CliTest, SweepThenBdRate) {
  ASSERT_EQ(Fcmc(std::string("gen --shapes ") + kSmallShapes + " --frames 4 -o " + Path("x.ftns")).exit_code, 0);
  const auto sw = Fcmc("sweep -i " + Path("x.ftns") + " -o " + Path("s.csv") + " --json " + Path("s.json") +
                      " --modes baseline,full --codecs requant --codec-params 4,5,6,8 --refresh 4 --workers 2");
  ASSERT_EQ(sw.exit_code, 0) << sw.out;
  EXPECT_NE(sw.out.find("rows=8"), std::string::npos);
  const auto csv = ReadFileBytes(Path("s.csv"));
  EXPECT_EQ(std::string(csv.begin(), csv.begin() + 5), "mode,");
  EXPECT_TRUE(fs::exists(Path("s.json")));
  const auto same = Fcmc("bdrate --anchor " + Path("s.csv") + " --anchor-where mode=full --test-where mode=full");
  ASSERT_EQ(same.exit_code, 0) << same.out;
  EXPECT_NEAR(Field(same.out, "bdrate_percent", ""), 0.0, 1e-9) << same.out;
  const auto cmp = Fcmc("bdrate --anchor " + Path("s.csv") + " --anchor-where mode=baseline --test-where mode=full");
  EXPECT_TRUE(cmp.exit_code == 0 || cmp.out.find("NoOverlap") != std::string::npos) << cmp.out;
}

TEST_F(CliTest, UsageErrorsHaveDistinctExitCode) {
  const auto none = Fcmc("");
  EXPECT_EQ(none.exit_code, 2) << none.out;
  const auto bad = Fcmc("encode --bogus");
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_NE(bad.out.find("fcmc: error: Usage:"), std::string::npos);
  ASSERT_EQ(Fcmc(std::string("gen --shapes ") + kSmallShapes + " --frames 1 -o " + Path("x.ftns")).exit_code, 0);
  const auto mode = Fcmc("encode -i " + Path("x.ftns") + " -o " + Path("x.fcms") + " --mode lossless");
  EXPECT_EQ(mode.exit_code, 2);
  EXPECT_NE(mode.out.find("fcmc: error: ConfigError:"), std::string::npos) << mode.out;
  EXPECT_EQ(Fcmc("--help").exit_code, 0);
}

TEST_F(CliTest, RuntimeErrorsNameTheCategory) {
  const auto missing = Fcmc("inspect " + Path("nope.fcms"));
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.out.find("fcmc: error: IoError:"), std::string::npos) << missing.out;
  EXPECT_NE(missing.out.find("nope.fcms"), std::string::npos);
  ASSERT_EQ(Fcmc(std::string("gen --shapes ") + kSmallShapes + " --frames 1 -o " + Path("x.ftns")).exit_code, 0);
  const auto wrong = Fcmc("inspect " + Path("x.ftns"));
  EXPECT_EQ(wrong.exit_code, 1);
  EXPECT_NE(wrong.out.find("fcmc: error: NotAStream:"), std::string::npos) << wrong.out;
  // Exactly one error line.
  const std::string err = wrong.out.substr(wrong.out.find("fcmc: error:"));
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);
}

}  // namespace
}  // namespace fcm

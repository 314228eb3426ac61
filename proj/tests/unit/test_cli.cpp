// Copyright 2026 The noisefp Authors
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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace noisefp::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "noisefp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("noisefp_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  const auto help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("generate"), std::string::npos);
  EXPECT_NE(help.out.find("verify"), std::string::npos);

  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  const auto missing = invoke({"generate", "--machines", "alder"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("--runs"), std::string::npos);
  EXPECT_EQ(invoke({"generate", "--machines", "alder", "--runs", "0", "--out", path("d")}).code, 1);
}

TEST_F(CliTest, Profiles) {
  const auto list = invoke({"profiles"});
  EXPECT_EQ(list.code, 0);
  EXPECT_NE(list.out.find("alder"), std::string::npos);
  EXPECT_NE(list.out.find("ginkgo"), std::string::npos);

  const auto one = invoke({"profiles", "--describe", "cedar"});
  EXPECT_EQ(one.code, 0);
  EXPECT_NE(one.out.find("\"machine_id\""), std::string::npos);
  EXPECT_NE(one.out.find("cedar"), std::string::npos);
  EXPECT_EQ(one.out.find("alder"), std::string::npos);

  const auto bad = invoke({"profiles", "--describe", "oak"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("oak"), std::string::npos);
}

TEST_F(CliTest, Verify) {
  const auto v = invoke({"verify", "--sequences", "5"});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("[PASS]"), std::string::npos);
  EXPECT_EQ(v.out.find("[FAIL]"), std::string::npos);
}

TEST_F(CliTest, GenerateThenRunWithConfigFile) {
  const auto gen = invoke({"generate", "--protocol", "fast", "--machines", "alder,cedar", "--runs", "10", "--seed",
                           "4", "--out", path("data")});
  ASSERT_EQ(gen.code, 0) << gen.err;
  EXPECT_TRUE(fs::exists(dir_ / "data" / "runs.csv"));

  {
    std::ofstream cfg(path("run.toml"));
    cfg << "experiment = \"pairwise\"\n"
        << "dataset = \"" << path("data") << "\"\n"
        << "out = \"" << path("report") << "\"\n"
        << "kernels = [\"linear\"]\n"
        << "tune-c = false\n";
  }
  const auto r = invoke({"run", "--config", path("run.toml")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pairwise report"), std::string::npos);
  bool has_csv = false;
  for (const auto& e : fs::directory_iterator(dir_ / "report")) has_csv = has_csv || e.path().extension() == ".csv";
  EXPECT_TRUE(has_csv);

  const auto again = invoke({"run", "--config", path("run.toml"), "--out", path("report2")});
  ASSERT_EQ(again.code, 0) << again.err;
  for (const auto& e : fs::directory_iterator(dir_ / "report")) {
    std::ifstream a(e.path());
    std::ifstream b(dir_ / "report2" / e.path().filename());
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str()) << e.path().filename();
  }
}

TEST_F(CliTest, InvalidInputsExitOne) {
  const auto no_data = invoke({"run", "--experiment", "pairwise", "--dataset", path("absent"), "--out", path("r")});
  EXPECT_EQ(no_data.code, 1);
  EXPECT_NE(no_data.err.find("error:"), std::string::npos);

  ASSERT_EQ(invoke({"generate", "--machines", "alder,cedar", "--runs", "5", "--out", path("data")}).code, 0);
  const auto bad_exp = invoke({"run", "--experiment", "table9", "--dataset", path("data"), "--out", path("r")});
  EXPECT_EQ(bad_exp.code, 1);
  EXPECT_NE(bad_exp.err.find("unknown experiment: table9"), std::string::npos);

  const auto slow_only =
      invoke({"run", "--experiment", "gap-sweep", "--dataset", path("data"), "--out", path("r")});
  EXPECT_EQ(slow_only.code, 1);
  EXPECT_NE(slow_only.err.find("requires a slow-protocol dataset"), std::string::npos);

  const auto bad_kernel = invoke({"run", "--experiment", "pairwise", "--dataset", path("data"), "--out", path("r"),
                                  "--kernels", "sigmoid"});
  EXPECT_EQ(bad_kernel.code, 1);
}

TEST_F(CliTest, OutputUnderRegularFileExitsOne) {
  { std::ofstream(path("blocker")) << "x"; }
  const auto r = invoke({"generate", "--machines", "alder", "--runs", "2", "--out", path("blocker") + "/data"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("cannot create"), std::string::npos);
}

TEST_F(CliTest, CommandLineOverridesConfigFile) {
  {
    std::ofstream cfg(path("gen.ini"));
    cfg << "[generate]\nmachines = alder\nruns = 3\nout = " << path("from_config") << "\n";
  }
  const auto r = invoke({"generate", "--config", path("gen.ini"), "--out", path("from_cli")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "from_cli" / "runs.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "from_config"));
  EXPECT_NE(r.out.find("wrote 3 runs"), std::string::npos);
}

TEST_F(CliTest, MissingConfigFileExitsOne) {
  const auto r = invoke({"profiles", "--config", path("nope.toml")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace noisefp::cli

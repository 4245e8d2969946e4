#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "example1.hpp"
#include "json.hpp"

namespace reqc {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("reqc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("dict.json", testing::kExample1DictionaryJson);
    write("reqs.txt", std::string("#id: E1\n") + testing::kExample1 +
                          "\n\n#id: INIT\nAt system start, [signal_E] holds.\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "reqc");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, CheckClean) {
  EXPECT_EQ(run({"check", path("reqs.txt"), "-d", path("dict.json")}), 0) << err_.str();
  EXPECT_EQ(err_.str(), "");
}

TEST_F(CliTest, CheckReportsDiagnosticsWithLocation) {
  write("bad.txt", "#id: B\nAt each time step, [signal_A and unknown_x] holds.\n");
  EXPECT_EQ(run({"check", path("bad.txt"), "-d", path("dict.json")}), 1);
  EXPECT_NE(err_.str().find(path("bad.txt") + ":2:"), std::string::npos) << err_.str();
  EXPECT_NE(err_.str().find("error: "), std::string::npos);
  EXPECT_NE(err_.str().find("unknown_x"), std::string::npos);
}

TEST_F(CliTest, SyntaxErrorListsExpected) {
  write("bad.txt", "#id: B\nAt each time step, [signal_A and] holds.\n");
  EXPECT_EQ(run({"check", path("bad.txt"), "-d", path("dict.json")}), 1);
  EXPECT_NE(err_.str().find("(expected "), std::string::npos) << err_.str();
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"check", path("reqs.txt")}), 2);
  EXPECT_EQ(run({"check", path("missing.txt"), "-d", path("dict.json")}), 2);
  EXPECT_EQ(run({"export", path("reqs.txt"), "-d", path("dict.json"), "-f", "pdf"}), 2);
  EXPECT_EQ(run({"export", path("reqs.txt"), "-d", path("dict.json"), "-f", "text", "--id", "NOPE"}), 2);
  EXPECT_EQ(run({"check", path("reqs.txt"), "-d", path("dict.json"), "--step-ms", "0"}), 2);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("testgen"), std::string::npos);
}

TEST_F(CliTest, ExportText) {
  ASSERT_EQ(run({"export", path("reqs.txt"), "-d", path("dict.json"), "-f", "text", "-o", path("out")}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "E1.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "INIT.txt"));
  EXPECT_NE(read("out/E1.txt").find("has been valid for [50 milliseconds]"), std::string::npos);
}

TEST_F(CliTest, ExportSpecXmlSkipsInitially) {
  ASSERT_EQ(run({"export", path("reqs.txt"), "-d", path("dict.json"), "-f", "spec-xml", "-o", path("out")}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "E1.spec.xml"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "INIT.spec.xml"));
  EXPECT_NE(err_.str().find("warning: skipped"), std::string::npos) << err_.str();
  EXPECT_EQ(run({"export", path("reqs.txt"), "-d", path("dict.json"), "-f", "spec-xml", "-o", path("out"),
                 "--strict"}),
            1);
}

TEST_F(CliTest, ExportSelection) {
  ASSERT_EQ(run({"export", path("reqs.txt"), "-d", path("dict.json"), "-f", "c", "-o", path("c"), "--id", "INIT"}),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "c" / "INIT.c"));
  EXPECT_FALSE(fs::exists(dir_ / "c" / "E1.c"));
  EXPECT_EQ(run({"export", path("reqs.txt"), "-d", path("dict.json"), "-f", "c", "--int-bits", "12"}), 2);
}

TEST_F(CliTest, EvalExample1Trace) {
  std::string csv = "# step_ms=10\nstep,signal_A,signal_B,signal_C,signal_D,signal_E\n";
  for (int t = 0; t < 8; ++t) csv += std::to_string(t) + ",1,0,10,1,0\n";
  write("trace.csv", csv);
  EXPECT_EQ(run({"eval", path("reqs.txt"), "-d", path("dict.json"), "-t", path("trace.csv"), "--id", "E1"}), 1);
  EXPECT_NE(out_.str().find("E1: fail"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("anchor 1, step 6"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("anchor 2, step 7"), std::string::npos);
  EXPECT_EQ(run({"eval", path("reqs.txt"), "-d", path("dict.json"), "-t", path("trace.csv"), "--form", "both"}), 1);
  EXPECT_EQ(out_.str().find("past form"), std::string::npos) << out_.str();
  EXPECT_EQ(run({"eval", path("reqs.txt"), "-d", path("dict.json"), "-t", path("trace.csv"), "--form", "blocks",
                 "--id", "E1"}),
            1);
  EXPECT_NE(out_.str().find("proof objective false at steps 6, 7"), std::string::npos) << out_.str();
}

TEST_F(CliTest, EvalPassingTrace) {
  std::string csv = "step,signal_A,signal_B,signal_C,signal_D,signal_E\n";
  for (int t = 0; t < 8; ++t) csv += std::to_string(t) + ",0,0,0,1,1\n";
  write("trace.csv", csv);
  EXPECT_EQ(run({"eval", path("reqs.txt"), "-d", path("dict.json"), "-t", path("trace.csv")}), 0) << err_.str();
  EXPECT_NE(out_.str().find("E1: pass"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("INIT: pass"), std::string::npos);
}

TEST_F(CliTest, EvalStepConflict) {
  write("trace.csv", "# step_ms=20\nstep,signal_A,signal_B,signal_C,signal_D,signal_E\n0,0,0,0,1,1\n");
  EXPECT_EQ(run({"eval", path("reqs.txt"), "-d", path("dict.json"), "-t", path("trace.csv"), "--step-ms", "10"}),
            2);
}

TEST_F(CliTest, Testgen) {
  write("or.txt", "#id: OR\nAt each time step, [signal_A or signal_B] holds.\n");
  ASSERT_EQ(run({"testgen", path("or.txt"), "-d", path("dict.json"), "--horizon", "1", "-o", path("tg")}), 0)
      << err_.str();
  EXPECT_NE(out_.str().find("OR: 100.0% (6/6 targets"), std::string::npos) << out_.str();
  auto report = nlohmann::json::parse(read("tg/OR.coverage.json"));
  EXPECT_EQ(report["percentage"], 100.0);
  for (const auto& v : report["vectors"]) {
    EXPECT_TRUE(fs::exists(dir_ / "tg" / ("OR." + v["id"].get<std::string>() + ".csv")));
  }
}

TEST_F(CliTest, TestgenPartialAndHorizon) {
  write("contra.txt", "#id: C\nAt each time step, [signal_A and (not signal_A)] holds.\n");
  EXPECT_EQ(run({"testgen", path("contra.txt"), "-d", path("dict.json"), "--horizon", "2", "-o", path("tg")}), 1);
  EXPECT_EQ(run({"testgen", path("contra.txt"), "-d", path("dict.json"), "--horizon", "2", "-o", path("tg"),
                 "--allow-partial"}),
            0);
  EXPECT_EQ(run({"testgen", path("reqs.txt"), "-d", path("dict.json"), "--horizon", "3", "-o", path("tg"), "--id",
                 "E1"}),
            2);
}

TEST_F(CliTest, DictValidateAndConvert) {
  EXPECT_EQ(run({"dict", "validate", path("dict.json")}), 0);
  ASSERT_EQ(run({"dict", "convert", path("dict.json"), "--to", "csv", "-o", path("d.csv")}), 0);
  EXPECT_EQ(run({"dict", "validate", path("d.csv")}), 0) << err_.str();
  ASSERT_EQ(run({"dict", "convert", path("d.csv"), "--to", "json"}), 0);
  EXPECT_EQ(nlohmann::json::parse(out_.str()), nlohmann::json::parse(testing::kExample1DictionaryJson));
  write("bad.json", R"([{"name": "x", "kind": "signal", "data_type": "bool", "min": 0}])");
  EXPECT_EQ(run({"dict", "validate", path("bad.json")}), 1);
  EXPECT_NE(err_.str().find("error"), std::string::npos);
}

}  // namespace
}  // namespace reqc

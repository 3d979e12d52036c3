#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "pcsmaa/cli.hpp"
#include "pcsmaa/problem_io.hpp"
#include "support.hpp"

using namespace pcsmaa;
using namespace testing_support;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pcsmaa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string school_file() { return data_path("school.json").string(); }

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("pcsmaa-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const Json& doc) const {
    std::ofstream(path(name)) << doc.dump();
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST(Cli, ValidateSchool) {
  const auto r = cli({"validate", school_file()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("total space: 944784"), std::string::npos);
  EXPECT_NE(r.out.find("1296"), std::string::npos);
}

TEST(Cli, ValidateJsonCrList) {
  const auto r = cli({"validate", school_file(), "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = Json::parse(r.out);
  const std::vector<double> expected{0.04, 0, 0, 0.18, 0, 0.04};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(doc["matrices"][i]["consistency_ratio"].get<double>(), expected[i], 0.01) << i;
  }
  EXPECT_EQ(doc["matrices"][6]["key"], "weights");
  EXPECT_EQ(doc["total_space"], 944784);
}

TEST(Cli, AnalyzeEnumerateTable) {
  const auto r = cli({"analyze", school_file(), "--mode", "enumerate"});
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* s : {"0.51 (483246)", "0.49 (461538)", "0.91 (855063)", "0.89 (842130)", "0.09 (89721)",
                        "0.11 (102654)"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
}

TEST(Cli, AnalyzeAutoPicksEnumerationForSchool) {
  const auto r = cli({"analyze", school_file(), "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["mode"], "enumerated");
}

TEST_F(CliFiles, AnalyzeAutoPicksSamplingForLargeSpace) {
  // 4 alternatives, 6 criteria: 1296 * 16^6 combinations.
  Json doc;
  doc["alternatives"] = {"w", "x", "y", "z"};
  doc["weights"] = to_json(school()).at("weights");
  Json four = Json::array({Json::array({1, 2, 3, 4}), Json::array({nullptr, 1, 2, 3}),
                           Json::array({nullptr, nullptr, 1, 2}), Json::array({nullptr, nullptr, nullptr, 1})});
  for (int c = 0; c < 6; ++c) {
    doc["criteria"].push_back("k" + std::to_string(c));
    doc["matrices"]["k" + std::to_string(c)] = four;
  }
  const auto file = write("telecom.json", doc);
  auto v = cli({"validate", file, "--format", "json"});
  ASSERT_EQ(v.status, 0) << v.err;
  EXPECT_EQ(Json::parse(v.out)["total_space"], 21743271936ULL);
  const auto r = cli({"analyze", file, "--iterations", "200", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["mode"], "sampled");
}

TEST(Cli, ZeroIterationsExitsTwo) {
  EXPECT_EQ(cli({"analyze", school_file(), "--mode", "sample", "--iterations", "0"}).status, 2);
}

TEST(Cli, EnumerateOverCapExitsTwo) {
  EXPECT_EQ(cli({"analyze", school_file(), "--mode", "enumerate", "--cap", "1000"}).status, 2);
}

TEST(Cli, BadFlagsExitTwo) {
  EXPECT_EQ(cli({"analyze", school_file(), "--mode", "guess"}).status, 2);
  EXPECT_EQ(cli({"analyze", school_file(), "--accuracy", "2", "--mode", "sample"}).status, 2);
  EXPECT_EQ(cli({"analyze", school_file(), "--repetitions", "0"}).status, 2);
  EXPECT_EQ(cli({}).status, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).status, 0); }

TEST_F(CliFiles, InvalidInputExitsOne) {
  auto doc = to_json(school());
  doc["matrices"]["Learning"][1][0] = 5;
  const auto r = cli({"analyze", write("bad.json", doc)});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("ReciprocityViolation"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"analyze", path("missing.json")}).status, 1);
  std::ofstream(path("garbage.json")) << "{not json";
  EXPECT_EQ(cli({"validate", path("garbage.json")}).status, 1);
}

TEST_F(CliFiles, DisconnectedValidateReportsDraft) {
  auto doc = to_json(school());
  doc["matrices"]["Friends"][0][1] = nullptr;
  doc["matrices"]["Friends"][0][2] = nullptr;
  doc["matrices"]["Friends"][1][0] = nullptr;
  doc["matrices"]["Friends"][2][0] = nullptr;
  const auto file = write("draft.json", doc);
  const auto r = cli({"validate", file});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("disconnected"), std::string::npos);
  EXPECT_EQ(cli({"analyze", file}).status, 1);
}

TEST_F(CliFiles, SeededOutputIsByteIdenticalAcrossWorkers) {
  const auto a = path("a.json"), b = path("b.json");
  ASSERT_EQ(cli({"analyze", school_file(), "--mode", "sample", "--seed", "42", "--workers", "1", "-o", a}).status, 0);
  ASSERT_EQ(cli({"analyze", school_file(), "--mode", "sample", "--seed", "42", "--workers", "3", "-o", b}).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(Json::parse(slurp(a))["plan"]["iterations"], 16641);
}

TEST_F(CliFiles, RepetitionsAndReport) {
  const auto out = path("reps.json");
  const auto r = cli({"analyze", school_file(), "--mode", "sample", "--iterations", "2000", "--repetitions", "3",
                      "--seed", "10", "-o", out});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("±"), std::string::npos);
  const auto doc = Json::parse(slurp(out));
  ASSERT_EQ(doc["runs"].size(), 3u);
  EXPECT_EQ(doc["runs"][0]["seed"], 10);
  EXPECT_EQ(doc["runs"][2]["seed"], 12);

  const auto rep = cli({"report", out});
  EXPECT_EQ(rep.status, 0) << rep.err;
  EXPECT_NE(rep.out.find("3 sampled run(s)"), std::string::npos);
  const auto json = cli({"report", out, "--format", "json"});
  EXPECT_EQ(Json::parse(json.out)["runs"], 3);
}

TEST_F(CliFiles, ReportRejectsMixedProblems) {
  const auto a = path("a.json"), b = path("b.json");
  ASSERT_EQ(cli({"analyze", school_file(), "--mode", "sample", "--iterations", "100", "-o", a}).status, 0);
  auto doc = to_json(school());
  doc["matrices"]["Learning"][0][1] = 2;
  doc["matrices"]["Learning"][1][0] = "1/2";
  ASSERT_EQ(cli({"analyze", write("other.json", doc), "--mode", "sample", "--iterations", "100", "-o", b}).status, 0);
  EXPECT_NE(cli({"report", a, b}).status, 0);
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "hardy/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("hardy_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "hardy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    err_.str("");
    return hardy::cli::run(static_cast<int>(argv.size()), argv.data(), err_);
  }

  json read_json(const std::string& name) const {
    std::ifstream in(dir_ / name);
    return json::parse(in);
  }

  std::string read_text(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  fs::path dir_;
  std::ostringstream err_;
};

std::string cyclicity_config(const std::string& components) {
  return R"({"blaschke":{"zeros":[{"re":0,"im":0,"mult":2}]},
             "lacunary":{"exponents":[1,2,4,8,16,32,64],"components":)" +
         components + R"(},"targets":4,"iterations":128})";
}

}  // namespace

TEST_F(CliTest, DecomposeBlocksForZSquared) {
  const auto cfg = write_config("d.json", R"({"blaschke":{"zeros":[{"re":0,"im":0,"mult":2}]},
                                             "function":{"coeffs":[3,2,1,4]},"depth":4})");
  ASSERT_EQ(run({"--config", cfg, "--out", dir_.string(), "decompose"}), 0) << err_.str();
  const auto rep = read_json("decompose.json");
  const auto& comps = rep.at("decomposition").at("components");
  ASSERT_GE(comps.size(), 2u);
  const double expected[2][2] = {{3.0, 2.0}, {1.0, 4.0}};
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(comps[k][i][0].get<double>(), expected[k][i], 1e-14);
      EXPECT_NEAR(comps[k][i][1].get<double>(), 0.0, 1e-14);
    }
  }
  EXPECT_LT(rep.at("decomposition").at("residual").get<double>(), 1e-15);
  EXPECT_TRUE(fs::exists(dir_ / "decompose.csv"));
}

TEST_F(CliTest, DecomposeShippedFixture) {
  ASSERT_EQ(run({"--config", fixture::path("decompose_example.json"), "--out", dir_.string(), "decompose"}), 0);
  const auto rep = read_json("decompose.json");
  EXPECT_LT(rep.at("reassembly_error").get<double>(), 1e-9);
  EXPECT_LT(std::abs(rep.at("parseval_defect").get<double>()), 1e-9);
}

TEST_F(CliTest, MalformedJsonIsConfigError) {
  const auto cfg = write_config("bad.json", R"({"blaschke": [)");
  EXPECT_EQ(run({"--config", cfg, "--out", dir_.string(), "decompose"}), 2);
  EXPECT_NE(err_.str().find("malformed"), std::string::npos);
}

TEST_F(CliTest, UnknownKeyAndMissingConfigAreConfigErrors) {
  const auto cfg = write_config("k.json", R"({"bogus": 1})");
  EXPECT_EQ(run({"--config", cfg, "--out", dir_.string(), "invariant-suite"}), 2);
  EXPECT_EQ(run({"--out", dir_.string(), "decompose"}), 2);
  EXPECT_EQ(run({"--out", dir_.string(), "no-such-command"}), 2);
}

TEST_F(CliTest, BadPolicyOverrideIsConfigError) {
  EXPECT_EQ(run({"--policy", "grid_size=512", "--out", dir_.string(), "invariant-suite"}), 2);
  EXPECT_NE(err_.str().find("invalid input"), std::string::npos);
}

TEST_F(CliTest, BandwidthOverflowReportsFeasibleTerms) {
  const auto cfg = write_config("o.json", R"({"blaschke":{"zeros":[{"re":0,"im":0,"mult":2}]},
      "lacunary":{"exponents":[1,2,4,8,16,32,64,128,256],
                  "components":[[1,0],[0,1],[1,0],[0,1],[1,0],[0,1],[1,0],[0,1],[1,0]]}})");
  EXPECT_EQ(run({"--config", cfg, "--out", dir_.string(), "cyclicity"}), 2);
  EXPECT_NE(err_.str().find("feasible terms: 7"), std::string::npos) << err_.str();
}

TEST_F(CliTest, CyclicityVerdicts) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"[[1,1],[0.5,-0.5],[0.25,0.25],[0.125,-0.125],[0.0625,0.0625],[0.03125,-0.03125],[0.015625,0.015625]]",
       "cyclic"},
      {"[[1,1],[0.5,0.5],[0.25,0.25],[0.125,0.125],[0.0625,0.0625],[0.03125,0.03125],[0.015625,0.015625]]",
       "non_cyclic"},
  };
  for (const auto& [comps, verdict] : cases) {
    const auto cfg = write_config("c.json", cyclicity_config(comps));
    ASSERT_EQ(run({"--config", cfg, "--out", dir_.string(), "cyclicity"}), 0) << err_.str();
    EXPECT_EQ(read_json("cyclicity.json").at("report").at("verdict"), verdict);
  }
  const auto two = write_config("two.json", R"({"blaschke":{"zeros":[{"re":0,"im":0,"mult":2}]},
      "lacunary":{"exponents":[1,2],"components":[[1,1],[0.5,-0.5]]}})");
  ASSERT_EQ(run({"--config", two, "--out", dir_.string(), "cyclicity"}), 0);
  EXPECT_EQ(read_json("cyclicity.json").at("report").at("verdict"), "inconclusive");
}

TEST_F(CliTest, CyclicityCsvHasOneRowPerIterate) {
  ASSERT_EQ(run({"--config", fixture::path("cyclic_z.json"), "--out", dir_.string(), "cyclicity"}), 0);
  const auto csv = read_text(dir_ / "cyclicity.csv");
  EXPECT_EQ(csv.rfind("n,target,distance\n", 0), 0u);
}

TEST_F(CliTest, LacunaryCheckFixture) {
  ASSERT_EQ(run({"--config", fixture::path("lacunary_b2.json"), "--out", dir_.string(), "lacunary-check"}), 0)
      << err_.str();
  const auto rep = read_json("lacunary-check.json");
  EXPECT_TRUE(rep.at("hypotheses").at("b2").at("pass").get<bool>());
  EXPECT_TRUE(rep.at("l4_l1").is_object());
  EXPECT_TRUE(fs::exists(dir_ / "lacunary-check.csv"));
}

TEST_F(CliTest, IterateFixture) {
  ASSERT_EQ(run({"--config", fixture::path("iterate_example.json"), "--out", dir_.string(), "iterate"}), 0)
      << err_.str();
  EXPECT_TRUE(read_json("iterate.json").contains("wold"));
}

TEST_F(CliTest, KernelGrowthFixture) {
  ASSERT_EQ(run({"--config", fixture::path("kernel_growth.json"), "--out", dir_.string(), "kernel-growth"}), 0)
      << err_.str();
  const auto csv = read_text(dir_ / "kernel-growth.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST_F(CliTest, InvariantSuiteOutcomes) {
  ASSERT_EQ(run({"--config", fixture::path("invariant_suite.json"), "--out", dir_.string(), "invariant-suite"}), 0)
      << err_.str();
  EXPECT_TRUE(read_json("invariant-suite.json").at("summary").at("all_pass").get<bool>());

  EXPECT_EQ(run({"--config", fixture::path("invariant_suite_aliased.json"), "--out", dir_.string(),
                 "invariant-suite"}),
            1);
  EXPECT_FALSE(read_json("invariant-suite.json").at("summary").at("all_pass").get<bool>());

  ASSERT_EQ(run({"--config", fixture::path("invariant_suite_empty.json"), "--out", dir_.string(),
                 "invariant-suite"}),
            0);
  EXPECT_TRUE(read_json("invariant-suite.json").at("summary").at("vacuous").get<bool>());
}

TEST_F(CliTest, ReportsEmbedPolicyVersionAndSeed) {
  ASSERT_EQ(run({"--seed", "7", "--policy", "rank_tolerance=1e-9", "--config",
                 fixture::path("invariant_suite_empty.json"), "--out", dir_.string(), "invariant-suite"}),
            0);
  const auto rep = read_json("invariant-suite.json");
  EXPECT_EQ(rep.at("seed"), 7);
  EXPECT_EQ(rep.at("version"), hardy::io::version());
  EXPECT_DOUBLE_EQ(rep.at("policy").at("rank_tolerance").get<double>(), 1e-9);
}

TEST_F(CliTest, BinaryOutputIsByteIdentical) {
  const std::string exe = HARDY_CLI_PATH;
  const auto a = dir_ / "a", b = dir_ / "b";
  for (const auto& out : {a, b}) {
    const std::string cmd = "\"" + exe + "\" --config \"" + fixture::path("invariant_suite.json") + "\" --out \"" +
                            out.string() + "\" invariant-suite > /dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
  }
  const auto first = read_text(a / "invariant-suite.json");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, read_text(b / "invariant-suite.json"));
}

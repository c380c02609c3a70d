#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "spinsq/spinsq.hpp"

using namespace spinsq;
using fixtures::kPi;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"spinsq"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : storage) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spinsq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name), std::ios::binary) << content;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  Json analyze(const std::string& file) const {
    const auto r = invoke({"analyze", file, "--format", "machine"});
    EXPECT_EQ(r.code, 0) << r.err;
    return Json::parse(r.out);
  }

 private:
  fs::path dir_;
};

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    EXPECT_EQ(line.find('\r'), std::string::npos);
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_F(Scratch, AnalyzeProductStateReportsHalf) {
  const auto file = write("product.json", StateFile(fixtures::tilted_product_state()).serialize());
  EXPECT_NEAR(analyze(file)["standard"]["xi1"].get<double>(), 0.5, 1e-9);
}

TEST_F(Scratch, AnalyzeBellStateReportsReasons) {
  const auto doc = analyze(write("bell.json", StateFile(fixtures::bell_state()).serialize()));
  EXPECT_TRUE(doc["standard"]["xi1"].is_null());
  EXPECT_EQ(doc["standard"]["undefined_reason"], "MeanSpinZero");
  EXPECT_EQ(doc["local_invariant"]["undefined_reason"], "QubitBlochZero");
}

TEST_F(Scratch, AnalyzeSchmidtStateFlagsEntanglement) {
  const auto doc = analyze(write("schmidt.json", StateFile(fixtures::schmidt_state(kPi / 8)).serialize()));
  EXPECT_NEAR(doc["local_invariant"]["xi1_tilde"].get<double>(), 0.541196, 1e-6);
  EXPECT_TRUE(doc["witness"]["squeezing_witness"].get<bool>());
  EXPECT_NE(doc["witness"]["verdict"], "Inconclusive");
}

TEST_F(Scratch, AnalyzeTextFormatAndOutputFile) {
  const auto file = write("css.json", StateFile(coherent_spin_state(3, 0.4, 0.2)).serialize());
  const auto report = path("report.txt");
  const auto r = invoke({"--output", report, "analyze", file});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(slurp(report).find("xi"), std::string::npos);
}

TEST_F(Scratch, GeneratedCssRoundTripsThroughAnalyze) {
  const auto out = path("css.json");
  ASSERT_EQ(invoke({"generate", "css", "--n", "4", "--theta", "1.0", "--phi", "0.5", "--output", out}).code, 0);
  const auto text = slurp(out);
  EXPECT_EQ(StateFile::parse(text).serialize(), text);
  const auto doc = analyze(out);
  EXPECT_NEAR(doc["standard"]["xi1"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(doc["input"]["digest"], "fnv1a64:" + fnv1a_hex(text));
}

TEST_F(Scratch, GeneratedTwistedStateIsSqueezed) {
  const auto out = path("twisted.json");
  ASSERT_EQ(invoke({"generate", "twisted", "--n", "10", "--mu", "0.2", "-o", out}).code, 0);
  EXPECT_LT(analyze(out)["standard"]["xi1"].get<double>(), 1.0);
}

TEST_F(Scratch, RandomSeparableGenerationIsDeterministic) {
  const auto a = invoke({"generate", "random-separable", "--n", "3", "--terms", "5", "--seed", "11"});
  const auto b = invoke({"--seed", "11", "generate", "random-separable", "--n", "3", "--terms", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(StateFile::parse(a.out).kind(), StateKind::Mixture);
  EXPECT_NE(a.out, invoke({"generate", "random-separable", "--n", "3", "--terms", "5", "--seed", "12"}).out);
}

TEST_F(Scratch, GenerateOtherKinds) {
  const auto product = invoke({"generate", "product", "--angles", "0:0,1.5707963267948966:0"});
  ASSERT_EQ(product.code, 0) << product.err;
  EXPECT_EQ(StateFile::parse(product.out).num_qubits(), 2);
  const auto dicke = invoke({"generate", "dicke", "--n", "4", "--k", "2"});
  ASSERT_EQ(dicke.code, 0) << dicke.err;
  EXPECT_EQ(StateFile::parse(dicke.out).kind(), StateKind::Symmetric);
  EXPECT_EQ(invoke({"generate", "schmidt", "--theta", "0.3"}).code, 0);
}

TEST(CliSweep, SchmidtCurveMatchesClosedForms) {
  const auto r = invoke({"sweep", "schmidt", "--from", "0", "--to", "0.7853981633974483", "--points", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.back(), '\n');
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 65u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"parameter", "xi1", "xi2", "xi1_tilde", "xi2_tilde", "concurrence",
                                               "invariant_I"}));
  double previous = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    ASSERT_EQ(row.size(), 7u);
    const double theta = std::stod(row[0]);
    EXPECT_GT(theta, previous);
    previous = theta;
    const double c = std::stod(row[5]);
    EXPECT_NEAR(c, std::sin(2 * theta), 1e-12);
    if (i + 1 == rows.size()) {
      // Bell endpoint: every Bloch vector vanishes.
      EXPECT_TRUE(row[3].empty());
      EXPECT_TRUE(row[1].empty());
      continue;
    }
    EXPECT_NEAR(std::stod(row[3]), std::sqrt(1 - c), 1e-9);
    if (i == 1) {
      EXPECT_NEAR(std::stod(row[1]), 1.0, 1e-12);
      EXPECT_NEAR(std::stod(row[3]), 1.0, 1e-12);
      EXPECT_EQ(c, 0.0);
    }
    EXPECT_NEAR(std::stod(row[1]), std::sqrt(1 - std::sin(2 * theta)), 1e-9);
    EXPECT_NEAR(std::stod(row[2]), 1 / std::sqrt(1 + std::sin(2 * theta)), 1e-9);
  }
}

TEST(CliSweep, TwistedAndCssColumns) {
  const auto twisted = parse_csv(invoke({"sweep", "twisted", "--n", "6", "--from", "0", "--to", "0.3", "--points", "4"}).out);
  ASSERT_EQ(twisted.size(), 5u);
  EXPECT_FALSE(twisted[1][6].empty());  // symmetric, so I is reported
  EXPECT_TRUE(twisted[1][5].empty());   // N != 2
  const auto css = parse_csv(invoke({"sweep", "css", "--n", "3", "--from", "0.2", "--to", "1", "--points", "3"}).out);
  ASSERT_EQ(css.size(), 4u);
  for (std::size_t i = 1; i < css.size(); ++i) EXPECT_NEAR(std::stod(css[i][1]), 1.0, 1e-9);
}

TEST(CliSweep, RejectsMalformedRanges) {
  EXPECT_EQ(invoke({"sweep", "schmidt", "--from", "1", "--to", "0", "--points", "4"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "schmidt", "--from", "0", "--to", "1", "--points", "0"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "schmidt", "--from", "0", "--to", "x", "--points", "3"}).code, 2);
}

TEST(CliVerify, SuitesPassWithSeedOne) {
  for (const char* suite : {"invariance", "separable-bound", "oracle", "identities"}) {
    const auto r = invoke({"verify", suite, "--seed", "1", "--samples", "10"});
    EXPECT_EQ(r.code, 0) << suite << "\n" << r.out << r.err;
    EXPECT_NE(r.out.find("result: PASS"), std::string::npos);
  }
}

TEST(CliVerify, FailureExitsOneWithReplay) {
  const auto r = invoke({"--format", "machine", "verify", "identities", "--samples", "2", "--tolerance", "0"});
  EXPECT_EQ(r.code, 1);
  const Json doc = Json::parse(r.out);
  EXPECT_FALSE(doc["passed"].get<bool>());
  bool replayed = false;
  for (const auto& p : doc["properties"])
    if (p["failed"].get<long>() > 0 && !p["replay"].empty()) {
      const auto file = StateFile::parse(p["replay"][0].dump());
      EXPECT_GE(file.num_qubits(), 2);
      replayed = true;
    }
  EXPECT_TRUE(replayed);
}

TEST_F(Scratch, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"verify", "nonsense"}).code, 2);
  EXPECT_EQ(invoke({"--format", "yaml", "verify", "oracle"}).code, 2);
  EXPECT_EQ(invoke({"analyze", path("missing.json")}).code, 2);
  EXPECT_EQ(invoke({"generate", "css", "--n", "0", "--theta", "0", "--phi", "0"}).code, 2);
  EXPECT_EQ(invoke({"generate", "dicke", "--n", "3", "--k", "5"}).code, 2);
  EXPECT_EQ(invoke({"generate", "product", "--angles", "1;2"}).code, 2);

  const auto bad = invoke({"analyze", write("bad.json", R"({"format_version":"1","kind":"pure","num_qubits":1,"payload":[[1,0]]})")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("'payload'"), std::string::npos);
}

TEST_F(Scratch, UnwritableOutputExitsTwo) {
  const auto r = invoke({"--output", path("no/such/dir/out.csv"), "sweep", "schmidt", "--from", "0", "--to", "1",
                         "--points", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cannot write"), std::string::npos);
}

TEST(CliHelp, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("analyze"), std::string::npos);
}

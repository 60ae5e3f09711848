#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "starq/serialization.hpp"
#include "starq_cli/cli.hpp"

namespace starq::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "starq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("starq-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_F(CliTest, ConstructWritesAVerifiableStar) {
  const Outcome c = run_cli({"construct", "--phi", "x1*x2*x3", "--order", "3", "--out", path("star.json")});
  EXPECT_EQ(c.status, kOk) << c.err;
  ASSERT_TRUE(fs::exists(path("star.json")));
  EXPECT_FALSE(fs::exists(path("star.json.tmp")));
  const Json doc = parse_json(slurp(path("star.json")));
  EXPECT_EQ(doc["order"], 3);
  EXPECT_EQ(doc["levels"].size(), 4u);
  EXPECT_EQ(doc["obstructionReports"].size(), 2u);

  const Outcome v = run_cli({"verify", path("star.json"), "--degree", "3"});
  EXPECT_EQ(v.status, kOk) << v.out << v.err;
  EXPECT_NE(v.out.find("PASS associator"), std::string::npos);
  EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, VerifyNamesTheFailingTripleOfAPerturbedStar) {
  ASSERT_EQ(run_cli({"construct", "--phi", "x1*x2*x3", "--order", "3", "--out", path("star.json")}).status, kOk);
  Json doc = parse_json(slurp(path("star.json")));
  Json& m2 = doc["levels"][2]["terms"];
  m2.push_back(Json{{"coeff", Json::array({Json{{"coeff", "1/1"}, {"factors", Json::array()}}})},
                    {"slots", Json::array({Json::array({1, 1}), Json::array({2, 2})})}});
  std::ofstream(path("bad.json")) << doc.dump();
  const Outcome v = run_cli({"verify", path("bad.json"), "--format", "json"});
  EXPECT_EQ(v.status, kCheckFailed);
  const Json report = parse_json(v.out);
  EXPECT_EQ(report["pass"], false);
  const std::string residual = report["checks"][0]["residual"];
  EXPECT_NE(residual.find("f="), std::string::npos);
  EXPECT_NE(residual.find("h="), std::string::npos);
}

TEST_F(CliTest, VerifyOrderOneStar) {
  ASSERT_EQ(run_cli({"construct", "--phi", "x1^2+x3", "--order", "1", "--out", path("one.json")}).status, kOk);
  EXPECT_EQ(run_cli({"verify", path("one.json")}).status, kOk);
}

TEST_F(CliTest, VerifySymbolicStarNeedsPotentials) {
  ASSERT_EQ(run_cli({"construct", "--phi", "sym", "--order", "2", "--out", path("sym.json")}).status, kOk);
  EXPECT_EQ(run_cli({"verify", path("sym.json")}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"verify", path("sym.json"), "--phi", "x1*x2 + x3^3"}).status, kOk);
}

TEST_F(CliTest, MissingOrCorruptFilesAreInputErrors) {
  EXPECT_EQ(run_cli({"verify", path("nothing.json")}).status, kInvalidInput);
  std::ofstream(path("corrupt.json")) << "{\"coefficients\": \"explicit\", \"levels\": [";
  EXPECT_EQ(run_cli({"verify", path("corrupt.json")}).status, kInvalidInput);
  std::ofstream(path("wrong.json")) << "{\"coefficients\": \"explicit\", \"mode\": \"nabla-phi\", \"order\": 1}";
  EXPECT_EQ(run_cli({"verify", path("wrong.json")}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"export-latex", path("nothing.json")}).status, kInvalidInput);
}

TEST_F(CliTest, ConfigInvariantsAreEnforced) {
  EXPECT_EQ(run_cli({"construct", "--phi", "x3", "--order", "0"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"construct", "--phi", "x3", "--order", "3", "--jet-order", "3"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"construct", "--phi", "x3", "--order", "2", "--format", "pdf"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"construct", "--phi", "x3", "--order", "2", "--gauge", "other"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"construct", "--phi", "x1/x2", "--order", "2"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"construct", "--mode", "psi-nabla-phi", "--phi", "x3", "--order", "2"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"obstruction", "--phi", "sym", "--k", "0"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"verify", "x.json", "--degree", "0"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({"no-such-command"}).status, kInvalidInput);
  EXPECT_EQ(run_cli({}).status, kInvalidInput);
}

TEST_F(CliTest, SmallestJetBoundSuffices) {
  const Outcome o = run_cli({"construct", "--phi", "sym", "--order", "3", "--jet-order", "4"});
  EXPECT_EQ(o.status, kOk) << o.err;
}

TEST_F(CliTest, OrderedConstructionObstructedForGenericPsi) {
  const Outcome o = run_cli({"construct", "--mode", "psi-nabla-phi", "--phi", "x1^2*x2", "--psi", "x3^2", "--order",
                             "4", "--opo-restrict", "--out", path("psi.json")});
  EXPECT_EQ(o.status, kObstructed) << o.err;
  EXPECT_NE(o.out.find("AR_4: NONZERO"), std::string::npos) << o.out;
  const Json doc = parse_json(slurp(path("psi.json")));
  EXPECT_EQ(doc["obstructedLevel"], 4);
  EXPECT_EQ(doc["orderedSearch"]["restrictedFeasible"], false);
  EXPECT_EQ(doc["obstructionReports"].back()["isZero"], false);
}

TEST_F(CliTest, OrderedConstructionForLinearPsiIsUnobstructed) {
  const Outcome o = run_cli({"construct", "--mode", "psi-nabla-phi", "--phi", "x3", "--psi", "x1", "--order", "4",
                             "--opo-restrict"});
  EXPECT_EQ(o.status, kOk) << o.err;
  EXPECT_NE(o.out.find("AR_4: zero"), std::string::npos) << o.out;
}

TEST_F(CliTest, JacobiResiduals) {
  const Outcome o = run_cli({"jacobi", "--P", "x3,x1,x2"});
  EXPECT_EQ(o.status, kObstructed);
  EXPECT_NE(o.out.find("x1 + x2 + x3"), std::string::npos) << o.out;
  EXPECT_EQ(run_cli({"jacobi", "--P", "x2*x3,x3*x1,x1*x2"}).status, kOk);
  EXPECT_EQ(run_cli({"jacobi", "--phi", "sym"}).status, kOk);
  EXPECT_EQ(run_cli({"jacobi", "--mode", "psi-nabla-phi", "--phi", "sym", "--psi", "sym"}).status, kOk);
  EXPECT_EQ(run_cli({"jacobi", "--mode", "psi-nabla-phi", "--phi", "x2", "--psi", "x1"}).status, kOk);
  EXPECT_EQ(run_cli({"jacobi", "--P", "x1,x2"}).status, kInvalidInput);
}

TEST_F(CliTest, OpoCheck) {
  const Outcome bad = run_cli({"opo-check", "dP(r;i,s) dP(s;j,r) @1(i) @2(j)"});
  EXPECT_EQ(bad.status, kCheckFailed);
  EXPECT_NE(bad.out.find("NOT OPO"), std::string::npos);
  const Outcome good = run_cli({"opo-check", "P(i,j) @1(i) @2(j)"});
  EXPECT_EQ(good.status, kOk);
  EXPECT_EQ(good.out.rfind("OPO", 0), 0u);
  EXPECT_EQ(run_cli({"opo-check", "dP(r;i,s @1(i)"}).status, kInvalidInput);
}

TEST_F(CliTest, ObstructionLevels) {
  const Outcome three = run_cli({"obstruction", "--phi", "sym", "--k", "3"});
  EXPECT_EQ(three.status, kOk);
  EXPECT_NE(three.out.find("zero (parity)"), std::string::npos);
  EXPECT_EQ(run_cli({"obstruction", "--phi", "sym", "--k", "2"}).status, kOk);
  const Outcome block = run_cli({"obstruction", "--phi", "sym", "--k", "4", "--gauge", "block"});
  EXPECT_EQ(block.status, kObstructed);
  const Outcome json = run_cli({"obstruction", "--phi", "x1*x2*x3", "--k", "4", "--format", "json"});
  EXPECT_EQ(json.status, kOk);
  EXPECT_EQ(parse_json(json.out)["isZero"], true);
}

TEST_F(CliTest, ExportLatex) {
  ASSERT_EQ(run_cli({"construct", "--phi", "x1^2*x2", "--order", "2", "--out", path("s.json")}).status, kOk);
  const Outcome o = run_cli({"export-latex", path("s.json"), "--out", path("s.tex")});
  EXPECT_EQ(o.status, kOk);
  const std::string tex = slurp(path("s.tex"));
  EXPECT_NE(tex.find("\\end{document}"), std::string::npos);
  EXPECT_NE(tex.find("x1\\^{}2"), std::string::npos);
}

TEST_F(CliTest, PotentialFromFile) {
  std::ofstream(path("phi.txt")) << "x1*x2*x3\n";
  EXPECT_EQ(run_cli({"construct", "--phi", "@" + path("phi.txt"), "--order", "2"}).status, kOk);
  EXPECT_EQ(run_cli({"construct", "--phi", "@" + path("none.txt"), "--order", "2"}).status, kInvalidInput);
}

TEST(Validate, ChecksInvariants) {
  JobConfig c;
  c.command = "construct";
  c.order = 2;
  EXPECT_NO_THROW(validate(c));
  c.jet_order = 2;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.jet_order = 3;
  EXPECT_NO_THROW(validate(c));
  c.degree = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
}

}  // namespace
}  // namespace starq::cli

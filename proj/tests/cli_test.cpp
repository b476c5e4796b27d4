#include "seqtc_cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace seqtc::cli {
namespace {

struct Result {
  int code;
  nlohmann::json body;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  const int code = run(std::move(args), out);
  return {code, nlohmann::json::parse(out.str())};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto dir = std::filesystem::temp_directory_path() / "seqtc_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << contents;
  return path;
}

TEST(Cli, ValueFn) {
  EXPECT_EQ(call({"value", "fn", "--d", "3", "--m", "2", "--n", "1", "--r", "2"}).body["exact"], 3);
  EXPECT_EQ(call({"value", "fn", "--d", "2", "--m", "2", "--n", "1", "--r", "2"}).body["exact"], 2);
  EXPECT_EQ(call({"value", "fn", "--d", "2", "--m", "3", "--n", "2", "--r", "3", "--json"}).body["exact"], 7);
}

TEST(Cli, BoundFn) {
  const auto res = call({"bound", "fn", "--d", "2", "--m", "2", "--n", "1", "--r", "2"});
  EXPECT_EQ(res.code, kExitOk);
  EXPECT_EQ(res.body["bound"], 2);
  EXPECT_EQ(res.body["paper_ref_tag"], "fn-fibration");
}

TEST(Cli, BoundSphereBundleAndCupLength) {
  const auto sb = call({"bound", "sphere-bundle", "--base", "cp2", "--q", "3", "--r", "2"});
  EXPECT_EQ(sb.code, kExitOk);
  EXPECT_GE(sb.body["bound"].get<int>(), 3);
  const auto cl = call({"bound", "cup-length", "--d", "3", "--m", "2", "--n", "1", "--r", "2"});
  EXPECT_EQ(cl.body["length"], 3);
  EXPECT_EQ(call({"bound", "sphere-bundle", "--base", "cp2", "--r", "3", "--partition", "1"}).code, kExitArgument);
}

TEST(Cli, CiteListsTags) {
  const auto res = call({"value", "so3", "--r", "3", "--cite"});
  ASSERT_TRUE(res.body.contains("citations"));
  EXPECT_FALSE(res.body["citations"].empty());
  EXPECT_FALSE(call({"value", "so3", "--r", "3"}).body.contains("citations"));
}

TEST(Cli, OtherValues) {
  EXPECT_EQ(call({"value", "spheres", "--dims", "2,4", "--r", "2"}).body["exact"], 4);
  EXPECT_EQ(call({"value", "spheres", "--dims", "2,2", "--r", "2", "--action", "general", "--p", "2,2"}).body["exact"],
            4);
  EXPECT_EQ(call({"value", "associate", "--dtc", "1"}).body["upper"], 3);
  EXPECT_EQ(call({"value", "threshold", "--r", "3"}).body["threshold"], "15/2");
  EXPECT_EQ(call({"value", "hopf", "--r", "4"}).body["exact"], 3);
  EXPECT_EQ(call({"value", "so3", "--r", "2"}).body["tc_comparison"], 3);
}

TEST(Cli, MeasureLpOfIdenticalFiles) {
  const auto a = temp_file("mu.json", R"([{"point":[0,0],"weight":0.5},{"point":[1,0],"weight":0.5}])");
  const auto b = temp_file("nu.json", R"([{"point":[1,0],"weight":"1/2"},{"point":[0,0],"weight":0.5}])");
  const auto res = call({"measure", "lp", "--mu", a.string(), "--nu", b.string()});
  EXPECT_EQ(res.code, kExitOk);
  EXPECT_EQ(res.body["distance"], 0.0);
  const auto prod = call({"measure", "product", "--mu", a.string(), "--nu", b.string()});
  EXPECT_EQ(prod.body["support"], 4);
  EXPECT_EQ(call({"measure", "lp", "--mu", a.string(), "--nu", "/nonexistent.json"}).code, kExitArgument);
}

TEST(Cli, RingCommands) {
  const auto nf = call({"ring", "normal-form", "--presentation", "conf:d=3,k=3", "--expr", "w_1_3*w_2_3"});
  EXPECT_EQ(nf.body["text"], "-w_1_2*w_1_3 + w_1_2*w_2_3");
  const auto ps = call({"ring", "poincare", "--presentation", "conf:d=2,k=4", "--max-degree", "3"});
  EXPECT_EQ(ps.body["coefficients"], nlohmann::json({1, 6, 11, 6}));
  const auto cf = call({"ring", "confluence", "--presentation", "fn:d=3,m=2,n=1,r=2"});
  EXPECT_EQ(cf.code, kExitOk);
  EXPECT_EQ(cf.body["ok"], true);
}

TEST(Cli, ConfluenceFailureIsValidationExit) {
  // y y -> x x and x y -> 0: the overlap x y y reduces to 0 and to x x x
  const auto path = temp_file("bad.json", R"({
    "version": 1,
    "generators": [{"id": "x", "degree": 2}, {"id": "y", "degree": 2}],
    "rules": [
      {"lhs": ["y", "y"], "rhs": [{"coeff": "1", "monomial": ["x", "x"]}]},
      {"lhs": ["x", "y"], "rhs": []}
    ]})");
  const auto res = call({"ring", "confluence", "--presentation", path.string()});
  EXPECT_EQ(res.code, kExitValidation);
  EXPECT_EQ(res.body["ok"], false);
}

TEST(Cli, CatalogDirectoryFromEnvironment) {
  const auto path = temp_file("cp1.json", R"({"version": 1, "generators": [{"id": "a", "degree": 2}],
    "rules": [{"lhs": ["a", "a"], "rhs": []}]})");
  ::setenv(presentations::kCatalogEnvVar, path.parent_path().c_str(), 1);
  const auto res = call({"ring", "poincare", "--presentation", "cp1", "--max-degree", "4"});
  ::unsetenv(presentations::kCatalogEnvVar);
  EXPECT_EQ(res.body["coefficients"], nlohmann::json({1, 0, 1, 0, 0}));
  EXPECT_EQ(call({"ring", "poincare", "--presentation", "cp1"}).code, kExitArgument);
}

TEST(Cli, NavCommands) {
  const auto rpn = call({"nav", "rpn", "--x", "1,0,0", "--y", "0,1,0"});
  EXPECT_EQ(rpn.body["support"], 2);
  EXPECT_EQ(rpn.body["atoms"][0]["weight"], 0.5);
  const auto circle = call({"nav", "circle", "--angles", "0,3.14159265358979,1"});
  EXPECT_LE(circle.body["support"].get<int>(), 4);
  const auto hopf = call({"nav", "hopf", "--points", "1,0,0,0;-1,0,0,0"});
  EXPECT_EQ(hopf.body["support"], 2);
  EXPECT_LT(hopf.body["fiber_deviation"].get<double>(), 1e-9);
  EXPECT_EQ(call({"nav", "hopf", "--points", "1,0,0,0;0,0,1,0"}).code, kExitArgument);
  const auto eq = call({"nav", "equivariance", "--n", "3", "--pairs", "20", "--group", "2"});
  EXPECT_EQ(eq.code, kExitOk);
  EXPECT_EQ(eq.body["samples"], 40);
  const auto cont = call({"nav", "continuity", "--n", "2", "--bases", "3", "--samples", "4"});
  EXPECT_EQ(cont.body["samples"], 12);
  EXPECT_LE(cont.body["max_discrepancy"].get<double>(), 1e-2);
}

TEST(Cli, ArgumentErrors) {
  EXPECT_EQ(call({"value", "fn", "--d", "1", "--m", "2", "--n", "1", "--r", "2"}).code, kExitArgument);
  EXPECT_EQ(call({"value", "fn", "--d", "2"}).code, kExitArgument);
  EXPECT_EQ(call({"nope"}).code, kExitArgument);
  EXPECT_EQ(call({}).code, kExitArgument);
  EXPECT_EQ(call({"nav", "rpn", "--x", "1,1", "--y", "0,1"}).code, kExitArgument);
  EXPECT_EQ(call({"ring", "normal-form", "--presentation", "conf:d=2,k=3", "--expr", "w_9_9"}).code, kExitArgument);
}

}  // namespace
}  // namespace seqtc::cli

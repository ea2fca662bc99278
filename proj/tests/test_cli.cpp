#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "zk/error.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run zk_run(std::vector<std::string> args) {
  args.insert(args.begin(), "zk");
  std::ostringstream out, err;
  const int code = zk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, ZclassesMarkdownHasFourRows) {
  auto r = zk_run({"zclasses", "gl:2@3^1", "--format", "md", "--no-footer"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(count_lines(r.out), 2u + 4u) << r.out;
  EXPECT_EQ(r.out.rfind("| block | rep |", 0), 0u);
}

TEST(Cli, OutputIsByteIdentical) {
  for (std::string fmt : {"json", "csv", "md", "table"}) {
    auto a = zk_run({"zclasses", "sl:2@3^1", "--format", fmt, "--no-footer"});
    auto b = zk_run({"zclasses", "sl:2@3^1", "--format", fmt, "--no-footer"});
    EXPECT_EQ(a.out, b.out) << fmt;
    EXPECT_EQ(a.out.find("runtime"), std::string::npos) << fmt;
  }
}

TEST(Cli, FooterPlacement) {
  auto t = zk_run({"zclasses", "gl:2@2^1"});
  EXPECT_NE(t.out.find("runtime: "), std::string::npos);
  auto j = zk_run({"zclasses", "gl:2@2^1", "--format", "json"});
  EXPECT_EQ(j.out.find("runtime"), std::string::npos);
  EXPECT_NE(j.err.find("runtime: "), std::string::npos);
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["schema"], "zclass-kit/1");
  EXPECT_EQ(doc["zclass_count"], 3);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(zk_run({"zclasses", "gl:9@2^1"}).code, 3);
  EXPECT_EQ(zk_run({"zclasses", "gl:2@3^1", "--max-group", "10"}).code, 3);
  EXPECT_EQ(zk_run({"zclasses", "sl:2@2^1"}).code, 2);
  EXPECT_EQ(zk_run({"zclasses", "sl:2@2^1", "--allow-bad-char", "--no-footer"}).code, 0);
  EXPECT_EQ(zk_run({"zclasses", "gl:2@6^1"}).code, 2);
  EXPECT_EQ(zk_run({"zclasses", "gl:2@3^1", "--format", "xml"}).code, 2);
  auto bad = zk_run({"frobnicate"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("frobnicate"), std::string::npos);
  EXPECT_EQ(zk_run({}).code, 2);
  EXPECT_EQ(zk_run({"--help"}).code, 0);
  EXPECT_EQ(zk_run({"experiment", "E99"}).code, 2);
  EXPECT_EQ(zk_run({"experiment", "E1", "q"}).code, 2);
  EXPECT_EQ(zk_run({"verify", "nightly"}).code, 2);
}

TEST(Cli, EnvironmentBounds) {
  setenv("ZK_MAX_GROUP", "20", 1);
  EXPECT_EQ(zk_run({"zclasses", "gl:2@3^1"}).code, 3);
  // flags win over the environment
  EXPECT_EQ(zk_run({"zclasses", "gl:2@3^1", "--max-group", "100", "--no-footer"}).code, 0);
  setenv("ZK_MAX_GROUP", "lots", 1);
  EXPECT_EQ(zk_run({"zclasses", "gl:2@3^1"}).code, 2);
  unsetenv("ZK_MAX_GROUP");
  setenv("ZK_MAX_FIELD", "8", 1);
  EXPECT_EQ(zk_run({"zclasses", "gl:2@3^2"}).code, 3);
  unsetenv("ZK_MAX_FIELD");
  EXPECT_EQ(zk_run({"zclasses", "gl:2@3^2", "--no-footer"}).code, 0);
}

TEST(Cli, Centralizer) {
  auto r = zk_run({"centralizer", "sl:2@5^1", "u_beta:2", "--format", "json", "--no-footer"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["centralizer"]["order"], 10);
  EXPECT_EQ(doc["element"], "[1,2;0,1]");
  EXPECT_EQ(zk_run({"centralizer", "u3@5^1", "h:3", "--no-footer"}).code, 0);
  EXPECT_EQ(zk_run({"centralizer", "gl:2@3^1", "[1,2]"}).code, 2);
  EXPECT_EQ(zk_run({"centralizer", "gl:2@3^1", "[0,0;0,0]"}).code, 2);
  EXPECT_EQ(zk_run({"centralizer", "gl:2@3^1", "zz:1"}).code, 2);
}

TEST(Cli, Conjtest) {
  auto gl = nlohmann::json::parse(
      zk_run({"conjtest", "gl:2@5^1", "u_beta:1", "u_beta:2", "--format", "json", "--no-footer"}).out);
  EXPECT_TRUE(gl["conjugate"].get<bool>());
  auto sl = nlohmann::json::parse(
      zk_run({"conjtest", "sl:2@5^1", "u_beta:1", "u_beta:2", "--format", "json", "--no-footer"}).out);
  EXPECT_FALSE(sl["conjugate"].get<bool>());
  auto forced = nlohmann::json::parse(
      zk_run({"conjtest", "gl:2@5^1", "u_beta:1", "u_beta:4", "--sl", "--format", "json", "--no-footer"}).out);
  EXPECT_TRUE(forced["conjugate"].get<bool>());
  auto table = nlohmann::json::parse(
      zk_run({"conjtest", "dihedral:5", "[0,1;1,0]", "[0,3;4,0]", "--format", "json", "--no-footer"}).out);
  EXPECT_EQ(table["method"], "group-table");
}

TEST(Cli, Probe) {
  auto r = zk_run({"probe", "borel-gl:2", "2", "2", "id|u_beta:1", "--format", "csv", "--no-footer"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "g,h,base,ext,changed\n\"[1,0;0,1]\",\"[1,1;0,1]\",yes,no,yes\n");
  EXPECT_EQ(zk_run({"probe", "gl:2", "3", "2", "id"}).code, 2);
}

TEST(Cli, HOne) {
  auto r = nlohmann::json::parse(zk_run({"h1", "--mu", "12", "--q", "7", "--format", "json", "--no-footer"}).out);
  EXPECT_EQ(r["class_count"], 6);
  EXPECT_EQ(r["realizing_degree"], 2);
  auto g = nlohmann::json::parse(
      zk_run({"h1", "--group", "gl:2@3^2", "--frobenius", "--format", "json", "--no-footer"}).out);
  EXPECT_EQ(g["coefficients"], "gl:2@3^2");
  EXPECT_GT(g["class_count"].get<int>(), 0);
  EXPECT_EQ(zk_run({"h1", "--mu", "3"}).code, 2);
  EXPECT_EQ(zk_run({"h1"}).code, 2);
  EXPECT_EQ(zk_run({"h1", "--group", "gl:2@3^2", "--frobenius", "--base", "4"}).code, 2);
}

TEST(Cli, ExperimentAndVerify) {
  auto e = zk_run({"experiment", "sl3-unipotent", "q=4", "--format", "json", "--no-footer"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(nlohmann::json::parse(e.out)["verdict"], "pass");
  EXPECT_EQ(zk_run({"experiment", "E3", "q=3"}).code, 2);
  EXPECT_EQ(zk_run({"experiment", "E3", "q=3", "--allow-bad-char", "--no-footer"}).code, 0);
  EXPECT_EQ(zk_run({"experiment", "E12", "n_max=4", "qs=[3,5]", "--no-footer"}).code, 0);
  auto v = zk_run({"verify", "smoke"});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("runtime: total"), std::string::npos);
  // a starved bound turns the suite into failures, exit 1
  EXPECT_EQ(zk_run({"verify", "smoke", "--max-group", "100", "--no-footer"}).code, 1);
}

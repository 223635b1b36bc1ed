#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

using Json = nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`; stderr is discarded unless `merge_stderr`.
Result run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string("'") + GYROKIT_CLI_PATH + "' " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

TEST(Cli, AddExamples) {
  EXPECT_EQ(run("add --u 0.5,0 --v 0,0").out, "0.5,0\n");
  const Result r = run("add --u 0.5,0 --v 0.3,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.695652173913043,0\n");
  EXPECT_EQ(run("add --u 0.5,0 --v 0,0.5").out, "0.5,0.433012701892219\n");
}

TEST(Cli, AddOutsideBallIsDomainError) {
  const Result r = run("add --u 1.5,0 --v 0,0", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("error"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("add --u 0.5,x --v 0,0").code, 2);
  EXPECT_EQ(run("add --u 0.5,0").code, 2);
  EXPECT_EQ(run("add --u 0.5,0 --v 0.1,0,0").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, NegativeCoordinates) {
  const Result r = run("add --u -0.3,0.1 --v 0,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "-0.3,0.1\n");
  EXPECT_EQ(run("gamma --u=-0.6,0").out, "1.25\n");
}

TEST(Cli, ScalarCommands) {
  EXPECT_EQ(run("gamma --u 0.8,0").out, "1.66666666666667\n");
  EXPECT_EQ(run("dist --x 0,0 --y 0.5,0").out, "0.549306144334055\n");
  const Result g = run("gyr --u 0.5,0 --v 0,0 --w 0.2,0.1");
  EXPECT_EQ(g.code, 0);
  EXPECT_EQ(g.out, "0.2,0.1\n");
}

TEST(Cli, CollinearAndCommutes) {
  Result r = run("collinear --x 0.1,0.1 --y 0.2,0.2 --z 0.3,0.3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out), (Json{{"collinear_gyro", true}, {"collinear_direct", true}}));
  r = run("collinear --x 0,0 --y 0.3,0 --z 0,0.3");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["collinear_gyro"], false);

  r = run("commutes --u 0.2,0 --v 0.6,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["commutes"], true);
  EXPECT_EQ(run("commutes --u 0.5,0 --v 0,0.5").code, 1);
}

TEST(Cli, MatrixModels) {
  Result r = run("bloch --v 0,0,0.6");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out), (Json{{"a", 0.8}, {"d", 0.2}, {"re_b", 0.0}, {"im_b", 0.0}}));

  r = run(R"(bloch --density '{"a":0.8,"d":0.2,"re_b":0,"im_b":0}')");
  EXPECT_EQ(r.out, "0,0,0.6\n");

  const std::string file = write_temp("rho.json", R"({"a":0.8,"d":0.2,"re_b":0,"im_b":0})");
  r = run("normdet --a " + file);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out), (Json{{"a", 2.0}, {"d", 0.5}, {"re_b", 0.0}, {"im_b", 0.0}}));

  r = run(R"(odot --a '{"a":0.75,"d":0.25,"re_b":0,"im_b":0}' --b '{"a":0.65,"d":0.35,"re_b":0,"im_b":0}')");
  EXPECT_EQ(r.code, 0);
  // Bloch vectors 0.5 e3 and 0.3 e3; the product sits at the 1-D sum 0.8 / 1.15.
  EXPECT_NEAR(Json::parse(r.out)["a"].get<double>(), 0.5 * (1 + 0.8 / 1.15), 1e-14);

  r = run(R"(boxdot --a '{"a":2,"d":0.5,"re_b":0,"im_b":0}' --b '{"a":3,"d":0.333333333333333333,"re_b":0,"im_b":0}')");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["a"], 6.0);

  EXPECT_EQ(run(R"(odot --a '{"a":0.9,"d":0.9,"re_b":0,"im_b":0}' --b '{"a":0.5,"d":0.5,"re_b":0,"im_b":0}')").code, 2);
  EXPECT_EQ(run("normdet --a /nonexistent/file.json").code, 2);
  EXPECT_EQ(run("bloch --v 0.1,0.2").code, 2);
}

TEST(Cli, ClassifyIdentity) {
  const std::string file = write_temp("id.json", "[[1,0,0],[0,1,0],[0,0,1]]");
  const Result r = run("classify " + file);
  EXPECT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["verdict"], "orthogonal");
  EXPECT_EQ(j["matrix"], (Json{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}));
}

TEST(Cli, ClassifyZero) {
  const Result r = run("classify zero");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out), (Json{{"verdict", "zero"}}));
}

TEST(Cli, ClassifyHalving) {
  const std::string file = write_temp("half.json", R"({"matrix": [[0.5,0],[0,0.5]]})");
  const Result r = run("classify " + file);
  EXPECT_EQ(r.code, 1);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["verdict"], "not_endomorphism");
  EXPECT_GT(j["residual"].get<double>(), 1e-6);
  EXPECT_EQ(j["witness"]["u"].size(), 2u);
  EXPECT_EQ(j["witness"]["v"].size(), 2u);
}

TEST(Cli, ClassifyErrors) {
  EXPECT_EQ(run("classify /nonexistent/map.json").code, 2);
  EXPECT_EQ(run("classify " + write_temp("bad.json", "[[1,0],[0")).code, 2);
  EXPECT_EQ(run("classify " + write_temp("one.json", "[[1]]")).code, 2);
  EXPECT_EQ(run("classify " + write_temp("big.json", "[[2,0],[0,2]]")).code, 2);
}

TEST(Cli, VerifyOnlyOneProperty) {
  const Result r = run("verify --only left_cancellation");
  EXPECT_EQ(r.code, 0);
  ASSERT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["name"], "left_cancellation");
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["samples_run"], 3000);
}

TEST(Cli, VerifyUnknownProperty) {
  const Result r = run("verify --only no_such_property", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("left_cancellation"), std::string::npos);
}

TEST(Cli, VerifySeedFromEnvironment) {
  unsetenv("GYROKIT_SEED");
  const Result r = run("verify --only closure");
  const Result env = [] {
    setenv("GYROKIT_SEED", "11", 1);
    Result x = run("verify --only closure");
    unsetenv("GYROKIT_SEED");
    return x;
  }();
  EXPECT_EQ(Json::parse(env.out)["seed"], 11);
  EXPECT_EQ(Json::parse(r.out)["seed"], 7);
  EXPECT_EQ(run("verify --only closure --seed 11").out, env.out);
}

TEST(Cli, VerifyAllPassesAtDefaults) {
  const Result r = run("verify --all --samples 1000 --seed 7");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 24);
}

TEST(Cli, VerifyFailingPropertyExitsOne) {
  const Result r = run("verify --only left_cancellation --abs-tol 1e-30");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["passed"], false);
}

}  // namespace

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef HSPHERE_CLI
#error "HSPHERE_CLI must name the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hsphere_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path at(const std::string& name) { return workdir() / name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout and stderr captured to files; returns the exit code.
int run(const std::string& args, const std::string& tag) {
  std::string cmd = std::string(HSPHERE_CLI) + " " + args + " > " + at(tag + ".out").string() + " 2> " +
                    at(tag + ".err").string();
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Cli, GenThenAnalyzeRoundSphere) {
  ASSERT_EQ(run("gen icosphere --subdiv 3 --radius 1 -o " + at("s.off").string(), "gen"), 0);
  json side = json::parse(slurp(at("s.off.json")));
  EXPECT_EQ(side["kind"], "icosphere");
  ASSERT_EQ(run("analyze " + at("s.off").string(), "analyze"), 0);
  json j = json::parse(slurp(at("analyze.out")));
  EXPECT_EQ(j["schema"], "hsphere.report/1");
  EXPECT_NEAR(j["estimate"]["D"].get<double>(), std::numbers::pi, 0.05 * std::numbers::pi);
  EXPECT_TRUE(j["sandwich"]["contains_one"].get<bool>());
  EXPECT_GT(j["surface"]["distance_tolerance"].get<double>(), 0.0);
  EXPECT_EQ(j["refine"], 1);
}

TEST(Cli, MissingMeshExitsThree) {
  EXPECT_EQ(run("analyze " + at("missing.off").string(), "missing"), 3);
  json e = json::parse(slurp(at("missing.err")));
  EXPECT_EQ(e["error"], "parse_error");
  EXPECT_EQ(e["exit_code"], 3);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("", "nosub"), 2);
  EXPECT_EQ(run("frobnicate", "badsub"), 2);
  EXPECT_EQ(run("gen klein_bottle -o " + at("k.off").string(), "badkind"), 2);
  EXPECT_EQ(json::parse(slurp(at("badkind.err")))["error"], "precondition_error");
}

TEST(Cli, NonManifoldMeshExitsThree) {
  std::ofstream(at("bad.off")) << "OFF\n4 2 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n";
  EXPECT_EQ(run("analyze " + at("bad.off").string(), "bad"), 3);
}

TEST(Cli, MapWritesObjAndCertificate) {
  ASSERT_EQ(run("gen icosphere --subdiv 2 -o " + at("m.off").string(), "genm"), 0);
  ASSERT_EQ(run("map " + at("m.off").string() + " -o " + at("m.obj").string(), "map"), 0);
  json j = json::parse(slurp(at("map.out")));
  EXPECT_EQ(j["construction"]["certificate"]["degree"], 1);
  EXPECT_TRUE(j["construction"]["certificate"]["degrees_agree"].get<bool>());
  EXPECT_NE(slurp(at("m.obj")).find("f "), std::string::npos);
}

TEST(Cli, ReportsAreByteIdentical) {
  ASSERT_EQ(run("gen ellipsoid --n 2 -o " + at("e.off").string(), "gene"), 0);
  ASSERT_EQ(run("gen genus_g --G 2 --n 1 -o " + at("g.off").string(), "geng"), 0);
  const std::string e = at("e.off").string(), g = at("g.off").string();
  for (const std::string& cmd : {"analyze " + e, "sweepout " + e, "systole " + g, "map " + e + " -o " + at("e.obj").string()}) {
    ASSERT_EQ(run(cmd + " --seed 3 --jobs 1", "det1"), 0) << cmd;
    ASSERT_EQ(run(cmd + " --seed 3 --jobs 3", "det3"), 0) << cmd;
    EXPECT_EQ(slurp(at("det1.out")), slurp(at("det3.out"))) << cmd;
  }
}

TEST(Cli, WidthOfBranchedCover) {
  ASSERT_EQ(run("width --cover 0.3 --seed 7", "cover"), 0);
  json j = json::parse(slurp(at("cover.out")));
  for (const auto& c : j["branched_cover"]["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
}

TEST(Cli, AuditDefaultSuitePasses) {
  EXPECT_EQ(run("audit --suite default --seed 7 --jobs 4", "audit"), 0);
  json j = json::parse(slurp(at("audit.out")));
  EXPECT_EQ(j["violations"], 0);
  EXPECT_EQ(j["meshes"].size(), 8u);
}

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "capk/cli.hpp"

using namespace capk;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

CliResult run(std::vector<std::string> args) { return run_cli(args); }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("capkern_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  out << s;
}

}  // namespace

TEST(Cli, ClassGroupTableRow) {
  auto r = run({"classgroup", "--m", "-23"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "D = -23, h = 3, structure Z/3\n");
  EXPECT_EQ(run({"classgroup", "--m", "-5"}).out, "D = -20, h = 2, structure Z/2\n");
  EXPECT_EQ(run({"classgroup", "--m", "-1"}).out, "D = -4, h = 1, structure 0\n");
  auto j = json::parse(run({"classgroup", "--m", "-23", "--json"}).out);
  EXPECT_EQ(j["h"], 3);
  EXPECT_EQ(j["group"]["invariants"], json::array({3}));
}

TEST(Cli, FlagshipReport) {
  auto r = run({"capitulate", "--f", "-5", "--adjoin", "-1", "--sigma", "inf"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["ker_j"]["h1"]["order"], 2);
  EXPECT_EQ(j["ker_j"]["norm_kernel"]["order"], 2);
  EXPECT_EQ(j["ker_j"]["direct"]["status"], "complete");
  EXPECT_EQ(j["ker_j"]["direct"]["certificates"].size(), 1u);
  EXPECT_TRUE(j["consistent"].get<bool>());
  EXPECT_TRUE(j["lac"]["exact"].get<bool>());
  EXPECT_EQ(j["extension"]["K"]["disc"], 400);
  // No wall-clock data in the canonical body.
  EXPECT_EQ(r.out.find("time"), std::string::npos);
  EXPECT_EQ(r.out.find("elapsed"), std::string::npos);
}

TEST(Cli, DeterministicOutput) {
  std::vector<std::string> a{"capitulate", "--f", "-6", "--adjoin", "2"};
  EXPECT_EQ(run(a).out, run(a).out);
  std::vector<std::string> s{"sweep", "--f-min", "-15", "--f-max", "-1", "--adjoin", "-1", "--workers", "1"};
  std::string one = run(s).out;
  s.back() = "4";
  EXPECT_EQ(one, run(s).out);
  auto t = run({"capitulate", "--f", "-6", "--adjoin", "2", "--timing"});
  EXPECT_NE(t.err.find("elapsed_ms"), std::string::npos);
  EXPECT_EQ(t.out, run(a).out);
}

TEST(Cli, CacheRoundTripAndCorruption) {
  fs::path dir = scratch("cache");
  std::vector<std::string> a{"capitulate", "--f", "-5", "--adjoin", "-1", "--cache-dir", dir.string()};
  std::string cold = run(a).out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  ASSERT_EQ(files.size(), 1u);
  auto warm = run(a);
  EXPECT_EQ(warm.out, cold);
  EXPECT_TRUE(warm.err.empty());

  // A tampered payload with a stale hash is rejected.
  std::ifstream in(files[0]);
  json entry = json::parse(in);
  in.close();
  std::string p = entry["payload"];
  auto pos = p.find("\"consistent\": true");
  ASSERT_NE(pos, std::string::npos);
  p.replace(pos, 18, "\"consistent\": fals");
  entry["payload"] = p;
  write_file(files[0], entry.dump());
  auto r = run(a);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, cold);
  EXPECT_NE(r.err.find("failed validation"), std::string::npos);
  EXPECT_TRUE(run(a).err.empty());  // rewritten entry is valid again

  write_file(files[0], "{not json");
  EXPECT_EQ(run(a).out, cold);
  write_file(files[0], "");
  EXPECT_EQ(run(a).out, cold);
  // Wrong key inside a well-formed entry.
  in.open(files[0]);
  entry = json::parse(in);
  in.close();
  entry["key"] = "0";
  write_file(files[0], entry.dump());
  EXPECT_NE(run(a).err.find("failed validation"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, CacheKeySeparatesBounds) {
  fs::path dir = scratch("bounds");
  run({"capitulate", "--f", "-5", "--adjoin", "-1", "--cache-dir", dir.string()});
  run({"capitulate", "--f", "-5", "--adjoin", "-1", "--cache-dir", dir.string(), "--bound", "1000"});
  run({"classgroup", "--m", "-5", "--cache-dir", dir.string()});
  std::size_t n = 0;
  for (auto it = fs::directory_iterator(dir); it != fs::directory_iterator(); ++it) ++n;
  EXPECT_EQ(n, 3u);
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kUsage);
  EXPECT_EQ(run({"classgroup"}).code, kUsage);
  EXPECT_EQ(run({"classgroup", "--m", "abc"}).code, kUsage);
  EXPECT_EQ(run({"classgroup", "--m", "-5", "--json", "--table"}).code, kUsage);
  EXPECT_EQ(run({"verify", "quartic"}).code, kUsage);
  EXPECT_EQ(run({"--help"}).code, kOk);

  auto d = run({"classgroup", "--m", "12"});
  EXPECT_EQ(d.code, kDomain);
  EXPECT_EQ(json::parse(d.err)["error"], "domain_error");
  EXPECT_EQ(run({"capitulate", "--f", "-1", "--adjoin", "2"}).code, kDomain);  // 2 ramifies
  EXPECT_EQ(run({"capitulate", "--f", "-1", "--adjoin", "2", "--sigma", "inf,2"}).code, kOk);
  EXPECT_EQ(run({"capitulate", "--f", "-1", "--adjoin", "2", "--sigma", "inf,2,9"}).code, kDomain);
  EXPECT_EQ(run({"capitulate", "--f", "-1", "--adjoin", "-1"}).code, kDomain);

  auto b = run({"classgroup", "--m", "-1000003"});
  EXPECT_EQ(b.code, kBound);
  EXPECT_EQ(json::parse(b.err)["error"], "bound_exceeded");

  fs::path dir = scratch("inputs");
  fs::create_directories(dir);
  write_file(dir / "mw.json",
             R"({"group": {"rank": 1}, "tau": [[1]], "fixed_claim": {"rank": 0}, "provenance": "wrong claim"})");
  EXPECT_EQ(run({"cohomology", "--mordell-weil", (dir / "mw.json").string()}).code, kInconsistent);
  write_file(dir / "bad.json", R"({"group": {"invariants": [4]}, "sigma": [[1, 0]]})");
  EXPECT_EQ(run({"cohomology", "--module", (dir / "bad.json").string()}).code, kDomain);
  write_file(dir / "odd.json", R"({"group": {"invariants": [7]}, "sigma": [[2]], "n": 3})");
  EXPECT_EQ(run({"cohomology", "--module", (dir / "odd.json").string()}).code, kOk);
  fs::remove_all(dir);
}

TEST(Cli, CohomologyModule) {
  fs::path dir = scratch("module");
  fs::create_directories(dir);
  write_file(dir / "m.json", R"({"group": {"invariants": [4], "rank": 1}, "sigma": [[3, 0], [0, -1]]})");
  auto r = run({"cohomology", "--module", (dir / "m.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["h1"]["structure"], "Z/2 + Z/2");
  EXPECT_EQ(j["fixed_points"]["structure"], "Z/2");
  EXPECT_TRUE(j["lac"]["exact"].get<bool>());
  fs::remove_all(dir);
}

TEST(Cli, VerifySuites) {
  auto r = run({"verify", "cool", "--trials", "200", "--max-order", "4096"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "cool: 200/200 exact\n");
  auto s = run({"verify", "six-term", "--trials", "200", "--json"});
  auto j = json::parse(s.out);
  EXPECT_EQ(j["exact"], 200);
  EXPECT_GT(j["enumerated_nodes"].get<long>(), 0);
}

TEST(Cli, SweepNegativeRange) {
  auto r = run({"sweep", "--f-min", "-10", "--f-max", "-1", "--adjoin", "-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_GE(j["items"].size(), 5u);
  for (const auto& it : j["items"]) EXPECT_TRUE(it["report"]["consistent"].get<bool>());
  EXPECT_TRUE(j["summary"]["all_consistent"].get<bool>());
  // -9, -8, -4 are not squarefree and -1 coincides with the adjoined root.
  std::map<long, std::string> reasons;
  for (const auto& s : j["skipped"]) reasons[s["f"].get<long>()] = s["reason"];
  EXPECT_EQ(reasons.at(-9), "not squarefree");
  EXPECT_EQ(reasons.at(-8), "not squarefree");
  EXPECT_EQ(reasons.at(-4), "not squarefree");
  EXPECT_EQ(reasons.at(-1), "degenerate pair");
  EXPECT_EQ(j["items"].size() + j["skipped"].size(), 10u);
}

TEST(Cli, SweepEmptyAndBounded) {
  auto j = json::parse(run({"sweep", "--f-min", "3", "--f-max", "2", "--adjoin", "-1"}).out);
  EXPECT_TRUE(j["items"].empty());
  EXPECT_TRUE(j["skipped"].empty());
  EXPECT_EQ(j["summary"]["reports"], 0);
  auto k = json::parse(run({"sweep", "--f-min", "-5", "--f-max", "-5", "--adjoin", "-1", "--max-disc", "100"}).out);
  ASSERT_EQ(k["skipped"].size(), 1u);
  EXPECT_NE(k["skipped"][0]["reason"].get<std::string>().find("exceeds"), std::string::npos);
}

TEST(Cli, OutputFile) {
  fs::path dir = scratch("out");
  fs::create_directories(dir);
  auto r = run({"classgroup", "--m", "-23", "--output", (dir / "o.txt").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(dir / "o.txt");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "D = -23, h = 3, structure Z/3");
  fs::remove_all(dir);
}

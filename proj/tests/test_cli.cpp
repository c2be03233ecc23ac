#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using starspec::Json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "starspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = starspec::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(STARSPEC_TEST_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(CliSpectrum, TripleUnitStrengthHasEmptyWindow) {
  const auto r = run({"--config", data("triple_tau1.json"), "spectrum"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["eigenvalues"].empty());
  EXPECT_EQ(j["manifest"]["command"], "spectrum");
}

TEST(CliSpectrum, SixEdgeAlternatingHasTwoDoubles) {
  const auto r = run({"--config", data("six_alternating.json"), "spectrum"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["eigenvalues"].size(), 2u);
  for (const auto& e : j["eigenvalues"]) EXPECT_EQ(e["multiplicity"], 2);
  EXPECT_EQ(j["total_multiplicity"], 4);
}

TEST(CliSpectrum, CsvAndWindow) {
  const auto r = run({"--config", data("triple_tau4.json"), "--format", "csv", "spectrum", "--lo", "-1", "--hi", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "lambda_tilde,lambda,multiplicity,residual,identity_defect");
}

TEST(CliSpectrum, MalformedConfigExitsTwo) {
  const auto r = run({"--config", data("malformed.json"), "spectrum"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InvalidInput"), std::string::npos);
}

TEST(CliDeficiency, KnownIndices) {
  for (auto [file, n] : {std::pair{"triple_tau4.json", 1}, std::pair{"triple_tau1.json", 0},
                         std::pair{"six_alternating.json", 2}}) {
    const auto r = run({"--config", data(file), "deficiency"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["n_plus"], n) << file;
    EXPECT_EQ(j["n_minus"], n) << file;
  }
}

TEST(CliDeficiency, ConfinementExitsTwo) { EXPECT_EQ(run({"--config", data("confined.json"), "deficiency"}).code, 2); }

TEST(CliSweep, TiedPairCsv) {
  const auto r = run({"--config", data("six_tied.json"), "sweep", "--param", "tau[1,3]", "--from", "-30", "--to",
                      "-4", "--steps", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "value,ok,n_plus,eigenvalues,error");
  EXPECT_EQ(l[1].substr(0, 9), "-30,1,0,,");
  EXPECT_EQ(l[2].substr(0, 7), "-17,1,1");
  EXPECT_EQ(l[3].substr(0, 6), "-4,1,2");
}

TEST(CliSweep, SingleStepEqualsDeficiency) {
  const auto s = run({"--config", data("six_tied.json"), "--format", "json", "sweep", "--param", "tau[1,3]", "--from",
                      "-4", "--to", "-4", "--steps", "0"});
  const auto d = run({"--config", data("six_tied.json"), "deficiency"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(Json::parse(s.out)["rows"][0]["n_plus"], Json::parse(d.out)["n_plus"]);
}

TEST(CliSweep, InputErrors) {
  const std::string cfg = data("six_tied.json");
  EXPECT_EQ(run({"--config", cfg, "sweep", "--param", "tau[1,3]", "--from", "0", "--to", "-1"}).code, 2);
  EXPECT_EQ(run({"--config", cfg, "sweep", "--param", "tau[7]", "--from", "0", "--to", "1"}).code, 2);
  EXPECT_EQ(run({"--config", cfg, "sweep", "--param", "omega[1]", "--from", "0", "--to", "1"}).code, 2);
  EXPECT_EQ(run({"--config", cfg, "sweep", "--from", "0", "--to", "1"}).code, 2);
}

TEST(CliValidate, DefaultPasses) {
  const auto r = run({"validate"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out)["all_passed"].get<bool>());
}

TEST(CliValidate, PerturbedFailsWithThree) {
  const auto r = run({"validate", "--suite", "bessel", "--perturb", "1e-4"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(Json::parse(r.out)["all_passed"].get<bool>());
  EXPECT_EQ(run({"validate", "--suite", "nope"}).code, 2);
}

TEST(CliUnitary, ArcCountAndMatrix) {
  const auto r = run({"--config", data("four_free.json"), "unitary", "--dump-matrix"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["arc_count"], 0);
  ASSERT_EQ(j["matrix"].size(), 8u);
  EXPECT_EQ(j["matrix"][0].size(), 8u);
  EXPECT_EQ(j["matrix"][0][0].size(), 2u);

  const auto six = Json::parse(run({"--config", data("six_alternating.json"), "unitary"}).out);
  EXPECT_EQ(six["arc_count"], 4);
  EXPECT_FALSE(six.contains("matrix"));
}

TEST(CliUnitary, NonSymmetricGraphGetsPhasesButNoArcCount) {
  const auto r = run({"--config", data("general_three.json"), "unitary"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["arc_count"].is_null());
  EXPECT_NE(j["arc_note"].get<std::string>().find("NotSymmetric"), std::string::npos);
  int total = 0;
  for (const auto& p : j["eigenphases"]) total += p["multiplicity"].get<int>();
  EXPECT_EQ(total, 6);
}

TEST(CliDefect, RayCaseSamplesDecay) {
  const double lt = 0.352416382349567;  // second ray root shifted by 1/2
  const auto r = run({"--config", data("ray.json"), "defect", "--lambda-tilde", std::to_string(lt)});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 101u);
  EXPECT_EQ(l[0], "r,theta,re1,im1,re2,im2");
  auto magnitude = [](const std::string& row) {
    std::vector<double> v;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) v.push_back(std::stod(c));
    return std::hypot(v[2], v[3], std::hypot(v[4], v[5]));
  };
  EXPECT_GT(magnitude(l[1]), 1e3 * magnitude(l[100]));
}

TEST(CliDefect, ZeroModeConfiguration) {
  const auto r = run({"--config", data("zero_mode.json"), "defect", "--lambda-tilde", "0", "--points", "5",
                      "--theta-points", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 21u);
}

TEST(CliDefect, InputErrors) {
  EXPECT_EQ(run({"--config", data("ray.json"), "defect", "--lambda-tilde", "0.6"}).code, 2);
  EXPECT_EQ(run({"--config", data("ray.json"), "defect", "--lambda-tilde", "0.2"}).code, 2);
  EXPECT_EQ(run({"--config", data("ray.json"), "defect", "--lambda-tilde", "0"}).code, 2);
  EXPECT_EQ(run({"--config", data("ray.json"), "defect", "--lambda-tilde", "0.35241638", "--sign", "2"}).code, 2);
}

TEST(CliOutput, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args = {"--config", data("general_three.json"), "--seed", "7", "spectrum",
                                         "--lo", "-2", "--hi", "2"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliOutput, OutFlagWritesFile) {
  const std::string path = ::testing::TempDir() + "starspec_cli_out.json";
  std::remove(path.c_str());
  const auto r = run({"--config", data("triple_tau4.json"), "--out", path, "deficiency"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(Json::parse(in)["n_plus"], 1);
  std::remove(path.c_str());
}

TEST(CliParse, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"spectrum"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "validate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

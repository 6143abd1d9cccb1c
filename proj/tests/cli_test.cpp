#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qfactor::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "qfactor_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Cli, FactorWithNarrowWidth) {
  const auto r = invoke({"factor", "1309", "--method", "revival", "--delta-n", "250"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["confirmed_factors"], nlohmann::json({7, 11, 17}));
  EXPECT_TRUE(j["complete"].get<bool>());
}

TEST(Cli, FactorCurlicueAndTrialDivision) {
  for (const char* method : {"curlicue", "trial-division"}) {
    const auto r = invoke({"factor", "21", "--method", method});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["confirmed_factors"], nlohmann::json({3, 7}));
  }
}

TEST(Cli, FactorCsvIsScan) {
  const auto r = invoke({"factor", "105", "--samples", "3", "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto lines = lines_of(r.out);
  EXPECT_EQ(lines.front(), "ell,delta_tau,S2");
  EXPECT_EQ(lines.size(), 1u + 3u * 10u);  // ell = 2..11
}

TEST(Cli, CurlicueCsv) {
  const auto r = invoke({"curlicue", "21", "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 22u);
  EXPECT_EQ(lines[0], "n,re,im,magnitude");
  for (std::size_t n = 1; n < 21; ++n) {
    std::stringstream fields(lines[n + 1]);
    std::string idx, re, im;
    std::getline(fields, idx, ',');
    std::getline(fields, re, ',');
    std::getline(fields, im, ',');
    const bool multiple = n % 3 == 0 || n % 7 == 0;
    EXPECT_EQ(std::abs(std::stod(im)) > 5.0, multiple) << n;
  }
}

TEST(Cli, GaussSumTable) {
  const auto r = invoke({"gauss-sum", "--r", "2", "--q", "1"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "m,re,im,abs");
  EXPECT_EQ(lines[1].substr(0, 2), "0,");
  EXPECT_LT(std::abs(std::stod(lines[1].substr(lines[1].rfind(',') + 1))), 1e-15);
  EXPECT_EQ(lines[2], "1,1,0,1");

  const auto j = invoke({"gauss-sum", "--r", "1", "--q", "0", "--format", "json"});
  EXPECT_EQ(nlohmann::json::parse(j.out)["values"], nlohmann::json::parse("[[1.0, 0.0]]"));
}

TEST(Cli, Decompose) {
  const auto r = invoke({"decompose", "--t", "7.25", "--N", "1309", "--rmax", "200"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["q"], 1);
  EXPECT_EQ(j["r"], 187);
  EXPECT_EQ(j["delta_t"].get<double>(), 0.25);
}

TEST(Cli, AutocorrFormats) {
  const auto csv = invoke({"autocorr", "1309", "--center", "7", "--halfwidth", "0.1", "--samples", "5"});
  ASSERT_EQ(csv.code, kOk) << csv.err;
  const auto lines = lines_of(csv.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "delta_tau,tau,re,im,S2");
  const auto json = invoke({"autocorr", "1309", "--center", "7", "--halfwidth", "0.1", "--samples",
                            "5", "--delta-n", "250", "--format", "json"});
  ASSERT_EQ(json.code, kOk) << json.err;
  const auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["delta_n"].get<double>(), 250.0);
  EXPECT_NEAR(1309.0 * j["samples"][2]["S2"].get<double>(), 7.0, 0.01);
}

TEST(Cli, CarpetCsvAndPgm) {
  const auto csv = invoke({"carpet", "--geometry", "box", "--size", "1", "--tmax", "1", "--nx", "16",
                           "--nt", "3"});
  ASSERT_EQ(csv.code, kOk) << csv.err;
  EXPECT_EQ(lines_of(csv.out).size(), 1u + 16u * 3u);
  const auto pgm = invoke({"carpet", "--geometry", "talbot", "--size", "2", "--tmax", "0.5",
                           "--nx", "32", "--nt", "4", "--format", "pgm"});
  ASSERT_EQ(pgm.code, kOk) << pgm.err;
  EXPECT_EQ(pgm.out.substr(0, 12), "P5\n32 4\n255\n");
  EXPECT_EQ(pgm.out.size(), 12u + 32u * 4u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kUsageError);
  EXPECT_EQ(invoke({"bogus"}).code, kUsageError);
  EXPECT_EQ(invoke({"factor", "1"}).code, kUsageError);
  EXPECT_EQ(invoke({"factor", "21", "--samples", "4"}).code, kUsageError);
  EXPECT_EQ(invoke({"factor", "21", "--method", "shor"}).code, kUsageError);
  EXPECT_EQ(invoke({"factor", "21", "--delta-n", "-3"}).code, kUsageError);
  EXPECT_EQ(invoke({"factor", "21", "--unknown-flag"}).code, kUsageError);
  EXPECT_EQ(invoke({"gauss-sum", "--r", "0", "--q", "1"}).code, kUsageError);
  EXPECT_EQ(invoke({"carpet", "--geometry", "ring", "--size", "1", "--tmax", "1", "--nx", "16",
                    "--nt", "2"})
                .code,
            kUsageError);
  const auto r = invoke({"curlicue", "abc"});
  EXPECT_EQ(r.code, kUsageError);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ResourceErrorIsComputationFailure) {
  const auto r = invoke({"carpet", "--geometry", "box", "--size", "1", "--tmax", "1", "--nx",
                         "65536", "--nt", "65536", "--cutoff", "1000"});
  EXPECT_EQ(r.code, kComputationError);
  EXPECT_NE(r.err.find("budget"), std::string::npos);
}

TEST(Cli, HelpForEveryCommand) {
  for (const char* cmd : {"factor", "autocorr", "curlicue", "carpet", "gauss-sum", "decompose", "figures"}) {
    const auto r = invoke({cmd, "--help"});
    EXPECT_EQ(r.code, kOk) << cmd;
    EXPECT_NE(r.out.find("Usage"), std::string::npos) << cmd;
  }
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST(Cli, OutputFileMatchesStdout) {
  const auto path = scratch("gauss.csv");
  std::filesystem::remove(path);
  const auto to_file = invoke({"gauss-sum", "--r", "9", "--q", "2", "--output", path.string()});
  ASSERT_EQ(to_file.code, kOk) << to_file.err;
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(slurp(path), invoke({"gauss-sum", "--r", "9", "--q", "2"}).out);
}

TEST(Cli, ConfigFilePrecedence) {
  const auto path = scratch("factor.cfg");
  {
    std::ofstream cfg(path);
    cfg << "# defaults for a run\nmethod = curlicue\nformat=json\n";
  }
  const auto from_file = invoke({"factor", "15", "--config", path.string()});
  ASSERT_EQ(from_file.code, kOk) << from_file.err;
  EXPECT_EQ(nlohmann::json::parse(from_file.out)["method"], "curlicue");

  const auto override = invoke({"factor", "15", "--method", "revival", "--config", path.string()});
  ASSERT_EQ(override.code, kOk) << override.err;
  EXPECT_EQ(nlohmann::json::parse(override.out)["method"], "revival");

  const auto bad = scratch("bad.cfg");
  {
    std::ofstream cfg(bad);
    cfg << "colour = blue\n";
  }
  EXPECT_EQ(invoke({"factor", "15", "--config", bad.string()}).code, kUsageError);
  EXPECT_EQ(invoke({"factor", "15", "--config", scratch("missing.cfg").string()}).code,
            kUsageError);
}

TEST(Cli, IdenticalRunsAreByteIdentical) {
  const std::vector<std::string> args = {"factor", "1309", "--samples", "5"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
  std::vector<std::string> threaded = {"--threads", "3"};
  threaded.insert(threaded.end(), args.begin(), args.end());
  EXPECT_EQ(invoke(args).out, invoke(threaded).out);
}

}  // namespace
}  // namespace qfactor::cli

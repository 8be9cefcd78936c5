#include "oracles.hpp"

#include "xbf/errors.hpp"
#include "xbf_cli/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace xbf::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "xbf");
  std::vector<char *> argv;
  for (auto &a : args) {
    argv.push_back(a.data());
  }
  std::ostringstream out;
  std::ostringstream err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    out.push_back(line);
  }
  return out;
}

TEST(Cli, SecondMoment) {
  const auto r = invoke({"moments", "--mu", "0", "--t", "1", "--n", "1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "n,moment");
  const double m2 = std::stod(l[2].substr(l[2].find(',') + 1));
  EXPECT_LE(oracle::rel_err(m2, oracle::iterated_moment(2)), 1e-10);
}

TEST(Cli, ThetaTableShape) {
  const auto r = invoke({"theta", "--t", "1", "--grid", "0.5:2:4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "r,theta");
  EXPECT_EQ(l[1].substr(0, 4), "0.5,");
}

TEST(Cli, JsonOutput) {
  const auto r = invoke({"gig", "--order", "0.5", "--a", "1", "--b", "1", "--grid", "1:2:2",
                         "--output", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"columns\""), std::string::npos);
  EXPECT_NE(r.out.find("\"cdf\""), std::string::npos);
}

TEST(Cli, SampleIsSeeded) {
  const std::vector<std::string> args{"sample", "--law", "gig", "--order", "0.5", "--a", "1",
                                      "--b",    "1",     "--count", "5", "--seed", "3"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 6u);
}

TEST(Cli, ValidationErrors) {
  EXPECT_EQ(invoke({"moments", "--mu", "0", "--t", "1"}).code, 2);
  EXPECT_EQ(invoke({"moments", "--mu", "zero", "--t", "1", "--n", "1"}).code, 2);
  EXPECT_EQ(invoke({"theta", "--t", "-1", "--grid", "1:2:2"}).code, 2);
  EXPECT_EQ(invoke({"theta", "--t", "1", "--grid", "2:1:3"}).code, 2);
  EXPECT_EQ(invoke({"laplace", "--mu", "1", "--t", "1", "--grid", "1:1:1", "--method",
                    "plancherel"})
                .code,
            2);
  EXPECT_EQ(invoke({"verify", "--suite", "nope"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--suite", "bougerol", "--paths", "5"}).code, 2);
  EXPECT_EQ(invoke({"nonsense"}).code, 2);
  const auto r = invoke({"moments", "--mu", "0", "--t", "1"});
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  EXPECT_EQ(lines(r.err).size(), 1u);
}

TEST(Cli, UnknownCommandInRun) {
  CliConfig c;
  c.command = "bogus";
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run(c, out, err), static_cast<int>(ExitCode::validation));
}

TEST(Cli, VerifySuite) {
  const auto r = invoke({"verify", "--suite", "finiteness"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"verdict\": \"pass\""), std::string::npos);
}

TEST(Cli, ConfigFile) {
  const std::string path = testing::TempDir() + "xbf_cli_config.json";
  {
    std::ofstream f(path);
    f << R"({"mu": 0, "t": 1, "n": "1", "output": "json"})";
  }
  const auto r = invoke({"moments", "--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"moment\""), std::string::npos);
  // Command-line values win over the file.
  const auto c = invoke({"moments", "--config", path, "--t", "2"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out, r.out);
  std::remove(path.c_str());
  EXPECT_EQ(invoke({"moments", "--config", path}).code, 2);
}

TEST(Cli, OutputFile) {
  const std::string path = testing::TempDir() + "xbf_cli_out.csv";
  const auto r = invoke({"moments", "--mu", "0", "--t", "1", "--n", "1", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "n,moment");
  std::remove(path.c_str());
}

TEST(ParseGrid, LinearAndGeometric) {
  const auto lin = parse_grid("0:1:3");
  ASSERT_EQ(lin.size(), 3u);
  EXPECT_DOUBLE_EQ(lin[1], 0.5);
  const auto geo = parse_grid("log:1:100:3");
  ASSERT_EQ(geo.size(), 3u);
  EXPECT_NEAR(geo[1], 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(geo[2], 100.0);
  EXPECT_THROW(parse_grid("log:0:1:3"), Error);
  EXPECT_THROW(parse_grid("1:2"), Error);
}

TEST(Csv, Format) {
  const Table t{{"a", "b"}, {{1.0, 0.5}, {2.0, -3.0}}};
  EXPECT_EQ(to_csv(t), "a,b\n1,0.5\n2,-3\n");
}

} // namespace
} // namespace xbf::cli

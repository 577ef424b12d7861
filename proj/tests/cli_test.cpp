#include "sixvertex/cli.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sixvertex;
using namespace sixvertex::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "sixvertex_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string capture(const std::string& cmd) {
  std::string text;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return text;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), got);
  pclose(pipe);
  return text;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sixvertex_cli_test_" + name);
}

RunConfig toml_config(const std::string& text) {
  RunConfig cfg;
  apply_toml(toml::parse(text), cfg);
  return cfg;
}

}  // namespace

TEST(Literals, ComplexRoundTrip) {
  EXPECT_EQ(parse_complex("0.5,-0.25", "gamma"), Complex(0.5, -0.25));
  EXPECT_EQ(parse_complex(" 1e-3 , 2 ", "gamma"), Complex(1e-3, 2.0));
  EXPECT_EQ(format_csv_complex(Complex{1.5, -2.0}), "1.5-2j");
  EXPECT_EQ(format_csv_complex(Complex{0.0, 0.25}), "0+0.25j");
  const Complex z{0.1234567890123, -9.87654321e-5};
  EXPECT_EQ(parse_complex(format_pair(z), "z"), z);
}

TEST(Literals, MalformedNamesField) {
  for (const char* bad : {"abc", "1", "1,2,3", "1,x", ",2"}) {
    try {
      parse_complex(bad, "phi2");
      FAIL() << bad;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), "phi2");
      EXPECT_NE(std::string(e.what()).find("expected \"re,im\""), std::string::npos);
    }
  }
}

TEST(Grid, ParsesAxes) {
  const auto g = parse_grid_axis("gamma=0.4,0;0.5,0.1");
  EXPECT_EQ(g.param, "gamma");
  ASSERT_EQ(g.values.size(), 2u);
  EXPECT_EQ(g.values[1], Complex(0.5, 0.1));
  EXPECT_TRUE(parse_grid_axis("h=").values.empty());
  EXPECT_THROW(parse_grid_axis("delta=1,0"), ConfigError);
  EXPECT_THROW(parse_grid_axis("gamma"), ConfigError);

  const auto pts = grid_points({{"gamma", {1.0, 2.0}}, {"phi1", {3.0, 4.0, 5.0}}});
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_EQ(pts[1], (std::vector<Complex>{1.0, 4.0}));
  EXPECT_EQ(pts[3], (std::vector<Complex>{2.0, 3.0}));
}

TEST(Toml, AppliesKeys) {
  const auto cfg = toml_config(R"(
boundary = "open"
L = 3
n = 1
gamma = "0.6,0.05"
h = 0.3
mu = ["0.1,0", "0,0.1", "-0.1,0"]
seed = 9
[tolerances]
funcrel = 1e-8
[[sweep.grid]]
param = "hbar"
values = ["0.2,-0.3", "0.1,-0.4"]
)");
  EXPECT_EQ(cfg.params.boundary, Boundary::Open);
  EXPECT_EQ(cfg.params.sites, 3);
  EXPECT_EQ(cfg.params.gamma, Complex(0.6, 0.05));
  EXPECT_EQ(cfg.params.h, Complex(0.3, 0.0));
  EXPECT_EQ(cfg.params.mu.size(), 3u);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.tol.funcrel, 1e-8);
  ASSERT_EQ(cfg.grid.size(), 1u);
  EXPECT_EQ(cfg.grid[0].values[1], Complex(0.1, -0.4));
}

TEST(Toml, RejectsUnknownAndMalformed) {
  try {
    toml_config("gamm = \"0.5,0\"\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "gamm");
  }
  try {
    toml_config("mu = [\"0.1,0\", \"oops\"]\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "mu[1]");
  }
  try {
    toml_config("[tolerances]\nfoo = 1.0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "tolerances.foo");
  }
}

TEST(Run, SolveSingleSiteClosedForm) {
  const auto r = run({"solve", "--L", "1", "--n", "1", "--gamma", "0.5,0", "--mu", "0,0", "--phi1", "1,0", "--phi2", "2,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], "1.0");
  ASSERT_EQ(j["solutions"].size(), 1u);
  const double re = j["solutions"][0]["roots"][0][0], im = j["solutions"][0]["roots"][0][1];
  EXPECT_LT(std::abs(std::sinh(Complex{re, im} - 0.688985917914529861)), 1e-12);
}

TEST(Run, ConfigErrorsExitTwo) {
  auto r = run({"verify", "--gamma", "abc"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gamma: malformed complex literal 'abc'"), std::string::npos) << r.err;

  r = run({"solve", "--L", "3", "--mu", "0,0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("mu"), std::string::npos) << r.err;

  r = run({"solve", "--gamma", "0,0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gamma"), std::string::npos) << r.err;

  EXPECT_EQ(run({"solve", "--bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"verify", "--tol", "nothing=1"}).code, 2);
  EXPECT_EQ(run({"solve", "--config", "/nonexistent/cfg.toml"}).code, 2);
}

TEST(Run, Help) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}

TEST(Run, VerifyDefaultPasses) {
  const auto r = run({"verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  for (const auto& s : j["solutions"]) {
    EXPECT_LT(s["oracle_relerr"].get<double>(), 1e-8);
    EXPECT_EQ(s["det_families"].size(), 3u);
    EXPECT_EQ(s["x0_samples"].size(), 5u);
  }
}

TEST(Run, VerifyOffShellFails) {
  const auto r = run({"verify", "--offshell"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("funcrel"), std::string::npos) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["pass"].get<bool>());
}

TEST(Run, VerifyOpenSmall) {
  const auto r = run({"verify", "--boundary", "open", "--L", "2", "--n", "1", "--seed", "3", "--csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("solution,roots,residual,oracle,", 0), 0u);
  EXPECT_NE(r.out.find(",true,"), std::string::npos);
}

TEST(Run, OutFileAndTomlOverride) {
  const auto cfg_path = temp_file("cfg.toml"), out_path = temp_file("out.json");
  {
    std::ofstream f(cfg_path);
    f << "L = 3\nn = 1\nseed = 5\ngamma = \"0.7,0\"\n";
  }
  const auto r = run({"solve", "--config", cfg_path.string(), "--gamma", "0.45,0.1", "--out", out_path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out_path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["config"]["L"], 3);
  EXPECT_EQ(j["config"]["seed"], 5);
  EXPECT_EQ(j["config"]["gamma"], "0.45,0.1");
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(out_path);
}

TEST(Sweep, GammaGridPasses) {
  const auto r = run({"sweep", "--L", "3", "--n", "1", "--grid", "gamma=0.4,0;0.5,0.05;0.6,0;0.7,-0.05;0.8,0", "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("index,gamma,admissible,solutions,pass,", 0), 0u);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_NE(line.find(",true,"), std::string::npos) << line;
    EXPECT_EQ(line.find("false"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 5);
}

TEST(Sweep, InadmissiblePointFlagged) {
  const auto r = run({"sweep", "--L", "2", "--n", "1", "--grid", "gamma=0,0;0.5,0", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_FALSE(j["rows"][0]["admissible"].get<bool>());
  EXPECT_EQ(j["rows"][0]["note"].get<std::string>().rfind("inadmissible: gamma", 0), 0u);
  EXPECT_TRUE(j["rows"][1]["pass"].get<bool>());
}

TEST(Sweep, EmptyGridGivesHeaderOnly) {
  const auto r = run({"sweep", "--grid", "phi2="});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST(Process, VerifyIsByteDeterministic) {
  const std::string cmd = std::string(SIXVERTEX_CLI_PATH) + " verify --L 3 --n 1 --seed 7 2>/dev/null";
  const auto a = capture(cmd), b = capture(cmd);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

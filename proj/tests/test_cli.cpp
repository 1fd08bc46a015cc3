#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "phlab/cli.hpp"

using namespace phlab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "phlab");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), err);
  return {code, err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("phlab_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

void expect_single_line_error(const Result& r, const std::string& kind) {
  ASSERT_FALSE(r.err.empty());
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j.at("error"), kind);
  EXPECT_EQ(j.at("exit_code"), r.code);
}

}  // namespace

TEST_F(Cli, OnedJsonSchema) {
  const auto r = run({"oned", "--m", "2", "--bc", "dirichlet", "--count", "5", "--format", "json", "--out",
                      path("o.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("o.json")));
  EXPECT_EQ(j.at("schema_version"), "1");
  EXPECT_EQ(j.at("m"), 2);
  EXPECT_EQ(j.at("bc"), "dirichlet");
  EXPECT_EQ(j.at("domain").at("shape"), "interval");
  EXPECT_EQ(j.at("method"), "exact1d");
  EXPECT_EQ(j.at("trusted_count"), 5);
  ASSERT_EQ(j.at("eigenvalues").size(), 5u);
  EXPECT_NEAR(j["eigenvalues"][0].get<double>(), std::pow(4.730040744862704, 4), 1e-9 * 500);
  for (const char* key : {"tol_zero", "tol_root", "tol_identity", "margin_factor"})
    EXPECT_TRUE(j.at("tolerances").contains(key));
  EXPECT_TRUE(j.contains("runtime_ms"));
  EXPECT_EQ(j.at("config").at("m"), 2);
}

TEST_F(Cli, StableOutputIsByteIdentical) {
  for (const char* name : {"a.json", "b.json"})
    ASSERT_EQ(run({"spectrum2d", "--m", "2", "--bc", "neumann", "--n", "10", "--count", "8", "--stable-output",
                   "--out", path(name)})
                  .code,
              0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(nlohmann::json::parse(slurp(path("a.json"))).at("runtime_ms"), 0.0);
}

TEST_F(Cli, CsvColumns) {
  ASSERT_EQ(run({"oned", "--m", "1", "--bc", "neumann", "--count", "3", "--format", "csv", "--out", path("s.csv")}).code,
            0);
  const auto text = slurp(path("s.csv"));
  EXPECT_EQ(text.substr(0, 8), "k,value\n");
  const auto v = io::parse_csv(text);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], 0.0);
  EXPECT_NEAR(v[1], M_PI * M_PI, 1e-9);
}

TEST(Io, CsvRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<double> x{0.0, 1.0, 0.1, 1e-300, 5e-324, 1.7976931348623157e308};
  for (int i = 0; i < 200; ++i) x.push_back(u(rng) * std::pow(10.0, i % 30 - 15));
  EXPECT_EQ(io::parse_csv(io::spectrum_csv(x)), x);
  EXPECT_TRUE(io::parse_csv(io::spectrum_csv({})).empty());
}

TEST(Io, JsonNumbers) {
  EXPECT_EQ(io::format_double(1.0), "1.0");
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "null");
  nlohmann::ordered_json j;
  j["x"] = 0.1;
  j["inf"] = std::numeric_limits<double>::infinity();
  j["list"] = nlohmann::ordered_json::array();
  const auto back = nlohmann::json::parse(io::dump_json(j));
  EXPECT_EQ(back.at("x").get<double>(), 0.1);
  EXPECT_TRUE(back.at("inf").is_null());
  EXPECT_TRUE(back.at("list").empty());
}

TEST(Io, EmptySpectrumIsValidJson) {
  const Spectrum s(OperatorOrder(1), BoundaryKind::Dirichlet, Domain::interval(1.0), {}, Exact1D{}, 0);
  const auto j = nlohmann::json::parse(io::dump_json(io::spectrum_json(s, {}, 0.0)));
  EXPECT_TRUE(j.at("eigenvalues").is_array());
  EXPECT_TRUE(j.at("eigenvalues").empty());
}

TEST(Io, MarkdownSectionPerClaim) {
  std::vector<VerificationReport> reports(3);
  reports[0].claim_id = "alpha";
  reports[1].claim_id = "beta";
  reports[1].add(1, 1.0, 2.0, 1.0, true);
  reports[2].claim_id = "gamma";
  reports[2].add(1, 3.0, 2.0, -1.0, false);
  const auto md = io::suite_markdown(reports, false);
  for (const char* id : {"alpha", "beta", "gamma"}) {
    const std::string header = std::string("\n## ") + id + "\n";
    EXPECT_EQ(std::count(md.begin(), md.end(), '#') >= 4, true);
    EXPECT_NE(md.find(header), std::string::npos) << id;
  }
  EXPECT_NE(md.find("**FAIL**"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  auto r = run({"oned", "--bogus"});
  EXPECT_EQ(r.code, 2);
  expect_single_line_error(r, "usage");

  r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);

  r = run({"oned", "--m", "4"});
  EXPECT_EQ(r.code, 2);
  expect_single_line_error(r, "capability");

  r = run({"verify", "no_such_claim"});
  EXPECT_EQ(r.code, 2);

  r = run({"spectrum2d", "--m", "1", "--n", "10", "--count", "71"});
  EXPECT_EQ(r.code, 2);

  r = run({"oned", "--tol-root", "-1"});
  EXPECT_EQ(r.code, 2);

  r = run({"oned", "--out", path("missing_dir/x.json")});
  EXPECT_EQ(r.code, 3);
  expect_single_line_error(r, "io");
}

TEST_F(Cli, VerifyPassAndInjectedFailure) {
  EXPECT_EQ(run({"verify", "remark12", "--m", "3", "--count", "8", "--out", path("r.json")}).code, 0);
  const auto j = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_EQ(j.at("claims").size(), 1u);

  EXPECT_EQ(run({"verify", "theorem", "--m", "1", "--n", "12", "--k-max", "5", "--out", path("t.json")}).code, 0);
  EXPECT_EQ(run({"verify", "theorem", "--m", "1", "--n", "12", "--k-max", "5", "--perturb-neumann", "3", "--out",
                 path("t.json")})
                .code,
            1);
  const auto t = nlohmann::json::parse(slurp(path("t.json")));
  EXPECT_FALSE(t.at("passed").get<bool>());
  EXPECT_EQ(t.at("config").at("perturb_neumann"), 3.0);
}

TEST_F(Cli, ConfigFilePrecedence) {
  {
    std::ofstream cfg(path("c.json"));
    cfg << R"({"m": 2, "count": 3, "bc": "neumann"})";
  }
  ASSERT_EQ(run({"oned", "--config", path("c.json"), "--m", "3", "--out", path("o.json")}).code, 0);
  const auto j = nlohmann::json::parse(slurp(path("o.json")));
  EXPECT_EQ(j.at("m"), 3);              // flag beats file
  EXPECT_EQ(j.at("bc"), "neumann");     // file beats default
  EXPECT_EQ(j.at("eigenvalues").size(), 3u);

  {
    std::ofstream cfg(path("bad.json"));
    cfg << R"({"m": 2, "verbosity": 3})";
  }
  const auto r = run({"oned", "--config", path("bad.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("verbosity"), std::string::npos);
}

TEST(Threads, EnvironmentVariable) {
  ::setenv("PHLAB_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(0), 3u);
  EXPECT_EQ(resolve_threads(2), 2u);
  ::setenv("PHLAB_THREADS", "zero", 1);
  EXPECT_THROW(resolve_threads(0), Error);
  ::unsetenv("PHLAB_THREADS");
  EXPECT_GE(resolve_threads(0), 1u);
}

TEST(Executable, HelpAndUsage) {
  EXPECT_EQ(std::system(PHLAB_EXE " --help > /dev/null"), 0);
  const int status = std::system(PHLAB_EXE " oned --bogus 2> /dev/null");
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

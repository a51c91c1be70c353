#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using finsler::cli::run;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "finsler-verify");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json strip_timing(json j) {
  j.erase("timing");
  return j;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("finsler_cli_" + name);
}

}  // namespace

TEST(Cli, CatalogListsMandatoryEntries) {
  const Result r = invoke({"catalog", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  std::vector<std::string> names;
  for (const auto& e : j["entries"]) names.push_back(e["name"]);
  for (const char* n : {"funk", "singular_hyperbolic", "kerr_randers", "minkowski_superunit"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  const Result t = invoke({"catalog"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("singular_hyperbolic"), std::string::npos);
}

TEST(Cli, VerifyFunkPasses) {
  const Result r = invoke({"verify", "--solution", "funk", "--samples", "100", "--seed", "7", "--tol", "1e-6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "finsler-verify/1");
  EXPECT_EQ(j["pass"], true);
  EXPECT_NEAR(j["estimated_K"]["mean"].get<double>(), -0.25, 1e-8);
  EXPECT_EQ(j["samples"], 100);
  EXPECT_EQ(j["seed"], 7);
}

TEST(Cli, VerifyKasnerInlineParams) {
  const Result r = invoke({"verify", "--solution", "kasner", "--params", R"({"lambda":3})", "--samples", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["estimated_K"]["mean"].get<double>(), -2.25, 1e-6 * 2.25);
}

TEST(Cli, ParamsFileWithSolutionWrapper) {
  const auto path = temp_file("params.json");
  std::ofstream(path) << R"({"solution": "kerr_randers", "params": {"m": -0.5, "a": 0.3, "lambda": 2.0}})";
  const Result r = invoke({"verify", "--params", path.string(), "--samples", "10"});
  std::filesystem::remove(path);
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["solution"], "kerr_randers");
  EXPECT_EQ(j["params"]["a"], 0.3);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"verify", "--solution", "funk", "--tol", "1e-30", "--samples", "5"}).code, 1);
  EXPECT_EQ(invoke({"verify", "--solution", "funk", "--params", R"({"perturbation":0.01})", "--samples", "10"}).code,
            1);
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"verify", "--solution", "no_such_entry"},
           {"verify", "--solution", "funk", "--params", R"({"bogus":1})"},
           {"verify", "--solution", "funk", "--params", R"({"n":"two"})"},
           {"verify", "--solution", "funk", "--params", "{not json"},
           {"verify", "--solution", "funk", "--tol", "-1"},
           {"verify", "--solution", "funk", "--samples", "0"},
           {"verify", "--solution", "funk", "--format", "xml"},
           {"verify", "--solution", "schwarzschild", "--params", R"({"m":1,"lambda":1})"},
           {"verify"},
           {"frobnicate"},
           {"deform", "--solution", "singular_hyperbolic", "--direction", "inverse"},
           {"deform", "--solution", "funk", "--point", "2,0"},
       }) {
    const Result r = invoke(args);
    EXPECT_EQ(r.code, 2) << args[0] << " " << (args.size() > 2 ? args[2] : "");
    EXPECT_FALSE(r.err.empty());
  }
}

TEST(Cli, SingularCaseExplains) {
  const Result r = invoke({"deform", "--solution", "singular_hyperbolic", "--direction", "inverse"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("singular case"), std::string::npos);
}

TEST(Cli, DeterministicJsonAcrossRunsAndJobs) {
  const std::vector<std::string> base{"verify", "--solution", "c_metric", "--samples", "12", "--seed", "5"};
  const Result a = invoke(base);
  const Result b = invoke(base);
  auto with_jobs = base;
  with_jobs.insert(with_jobs.end(), {"--jobs", "3"});
  const Result c = invoke(with_jobs);
  ASSERT_EQ(a.code, 0) << a.err;
  const std::string sa = strip_timing(json::parse(a.out)).dump();
  EXPECT_EQ(sa, strip_timing(json::parse(b.out)).dump());
  EXPECT_EQ(sa, strip_timing(json::parse(c.out)).dump());
  // Only the timing key differs between runs.
  json ja = json::parse(a.out);
  EXPECT_TRUE(ja.contains("timing"));
  EXPECT_TRUE(ja["timing"].contains("timestamp"));
}

TEST(Cli, NumbersRoundTrip) {
  const Result r = invoke({"verify", "--solution", "funk", "--samples", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("index,x0,x1,y0,y1,F,alpha,b,residual", 0), 0u) << header;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
  const json j = json::parse(invoke({"verify", "--solution", "funk", "--samples", "3"}).out);
  const double k = j["estimated_K"]["mean"];
  // 17 significant digits survive a text round trip exactly.
  EXPECT_EQ(json::parse(json(k).dump()).get<double>(), k);
}

TEST(Cli, TextFormatAndOutputFile) {
  const Result t = invoke({"verify", "--solution", "funk", "--samples", "5", "--format", "text"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("PASS"), std::string::npos);
  const auto path = temp_file("report.json");
  const Result f = invoke({"verify", "--solution", "funk", "--samples", "5", "--output", path.string()});
  EXPECT_EQ(f.code, 0);
  EXPECT_TRUE(f.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_EQ(j["solution"], "funk");
  std::filesystem::remove(path);
}

TEST(Cli, EnvironmentDefaultTolerance) {
  ::setenv("FINSLER_VERIFY_DEFAULT_TOL", "1e-30", 1);
  const Result strict = invoke({"verify", "--solution", "funk", "--samples", "5"});
  ::setenv("FINSLER_VERIFY_DEFAULT_TOL", "1e-3", 1);
  const Result loose = invoke({"verify", "--solution", "funk", "--samples", "5"});
  const Result explicit_tol = invoke({"verify", "--solution", "funk", "--samples", "5", "--tol", "1e-6"});
  ::unsetenv("FINSLER_VERIFY_DEFAULT_TOL");
  EXPECT_EQ(strict.code, 1);
  EXPECT_EQ(loose.code, 0);
  EXPECT_EQ(json::parse(loose.out)["tol"], 1e-3);
  EXPECT_EQ(json::parse(explicit_tol.out)["tol"], 1e-6);
}

TEST(Cli, DeformFunkInverseIsFlat) {
  const Result r = invoke({"deform", "--solution", "funk", "--direction", "inverse", "--point", "0.3,0.1", "--y", "1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["alpha_bar_squared"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(j["beta_bar"].get<double>()), 0.3, 1e-12);
  EXPECT_NEAR(j["b"].get<double>(), j["bbar"].get<double>(), 1e-10);
  EXPECT_EQ(j["branch"], "riemann_sub_unit");
}

TEST(Cli, DeformForwardSuperUnit) {
  const Result r = invoke({"deform", "--solution", "minkowski_superunit", "--direction", "forward"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["norms_match"], true);
  EXPECT_GT(j["b"].get<double>(), 1.0);
  EXPECT_EQ(j["branch"], "lorentz_super_unit");
  EXPECT_NEAR(j["F"].get<double>(), j["alpha"].get<double>() + j["beta"].get<double>(), 1e-12);
}

TEST(Cli, DeformZeroFormInverseIsIdentity) {
  // a = q = 0 and mu = 1 leave no wind, so beta = 0 and the deformation is trivial.
  const Result r = invoke({"deform", "--solution", "riemann_space_form", "--params", R"({"a":0,"q":0})",
                           "--direction", "inverse", "--point", "0.1,0.2,0", "--y", "1,0,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["beta_bar"], 0.0);
  EXPECT_EQ(j["b"], 0.0);
  const Result f = invoke({"deform", "--solution", "riemann_space_form", "--params", R"({"a":0,"q":0})",
                           "--direction", "forward", "--point", "0.1,0.2,0", "--y", "1,0,0"});
  ASSERT_EQ(f.code, 0) << f.err;
  const json k = json::parse(f.out);
  EXPECT_EQ(k["beta"], 0.0);
  EXPECT_NEAR(k["alpha"].get<double>() * k["alpha"].get<double>(), j["alpha_bar_squared"].get<double>(), 1e-14);
}

TEST(Cli, PrioriCommand) {
  const Result r = invoke({"priori", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["pass"], true);
  EXPECT_LE(j["max_residual"].get<double>(), 1e-8);
  EXPECT_GE(j["identities"].size(), 13u);
  const Result s = invoke({"priori", "--solution", "schwarzschild", "--data", "navigation", "--samples", "5"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_LE(json::parse(s.out)["max_residual"].get<double>(), 1e-8);
  const Result t = invoke({"priori", "--format", "text"});
  EXPECT_NE(t.out.find("q^i_i"), std::string::npos);
}

TEST(Cli, PublishedSchemasExist) {
  for (const char* f : {"catalog.schema.json", "report.schema.json"}) {
    std::ifstream in(std::filesystem::path(FINSLER_SCHEMA_DIR) / f);
    ASSERT_TRUE(in.good()) << f;
    const json s = json::parse(in);
    EXPECT_TRUE(s.contains("$schema"));
  }
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "bccanon/cli.hpp"

using namespace bccanon;

namespace {

const std::string kFixtures = FIXTURE_DIR;

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bccanon_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

// Runs the built executable; returns its exit status.
int run_binary(const std::string& args) {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, GenerateThenCheck) {
  const auto dir = fresh_dir("gen");
  const CommandOutcome g = run_command({"generate", "--order", "5", "--seed", "7", "--out", dir.string()});
  ASSERT_EQ(g.exit_code, kExitOk) << g.message;
  const CommandOutcome c = run_command({"check", (dir / "A.json").string(), (dir / "B.json").string()});
  EXPECT_EQ(c.exit_code, kExitOk);
  EXPECT_EQ(c.report.verdict, "self-adjoint");
  EXPECT_LT(c.report.metrics.at("gram_residual").get<double>(), 1e-11);
  EXPECT_EQ(c.report.metrics.at("rank(A:B)"), 5);
}

TEST(Cli, CheckOneSidedFails) {
  const CommandOutcome c = run_command({"check", fixture("I5.json"), fixture("zero5.json")});
  EXPECT_EQ(c.exit_code, kExitCriterion);
  EXPECT_EQ(c.report.verdict, "not self-adjoint");
}

TEST(Cli, ClassifyIdentityFixture) {
  const CommandOutcome c =
      run_command({"classify", fixture("identity_W5_A.json"), fixture("identity_W5_B.json")});
  ASSERT_EQ(c.exit_code, kExitOk) << c.message;
  EXPECT_EQ(c.report.verdict, "Mixed");
  EXPECT_EQ(c.report.metrics.at("r"), 0);
  EXPECT_EQ(c.report.metrics.at("rank_A"), 3);
  EXPECT_EQ(c.report.metrics.at("rank_B"), 3);
}

TEST(Cli, ClassifyEvenFixtures) {
  EXPECT_EQ(run_command({"classify", fixture("dirichlet_A.json"), fixture("dirichlet_B.json")}).report.verdict,
            "Separated");
  EXPECT_EQ(run_command({"classify", fixture("periodic_A.json"), fixture("periodic_B.json")}).report.verdict,
            "Coupled");
}

TEST(Cli, CanonWritesFactorsAndManifest) {
  const auto dir = fresh_dir("canon");
  const CommandOutcome c = run_command({"canon", fixture("identity_W5_A.json"), fixture("identity_W5_B.json"),
                                        "--out", dir.string(), "--format", "json"});
  ASSERT_EQ(c.exit_code, kExitOk) << c.message;
  EXPECT_EQ(c.format, ReportFormat::Json);
  EXPECT_LT(c.report.metrics.at("reconstruction_residual").get<double>(), 1e-9);
  for (const char* name : {"Q1", "Q2", "Q3", "Q4", "core", "K", "W", "C_diag", "S_diag"}) {
    const auto path = dir / (std::string(name) + ".json");
    ASSERT_TRUE(std::filesystem::exists(path)) << name;
    const ComplexMatrix m = parse_matrix_file(path.string());
    EXPECT_EQ(m, c.report.factors.at(name)) << name;
  }
  const Json manifest = read_json_file((dir / "manifest.json").string());
  EXPECT_EQ(manifest["files"]["Q1"], "Q1.json");
  EXPECT_EQ(manifest["verdict"], "Mixed");
  // Embedded factors parse back bit-equal.
  const Json report = Json::parse(format_report(c.report, ReportFormat::Json));
  EXPECT_EQ(matrix_from_json(report["factors"]["Q2"]), c.report.factors.at("Q2"));
}

TEST(Cli, CanonEvenOrder) {
  const auto dir = fresh_dir("canon_even");
  const CommandOutcome c =
      run_command({"canon", fixture("periodic_A.json"), fixture("periodic_B.json"), "--out", dir.string()});
  ASSERT_EQ(c.exit_code, kExitOk) << c.message;
  EXPECT_TRUE(std::filesystem::exists(dir / "Z.json"));
  EXPECT_LT(c.report.metrics.at("reconstruction_residual").get<double>(), 1e-9);
}

TEST(Cli, NumericalFailureOnCanon) {
  const auto dir = fresh_dir("canon_bad");
  const CommandOutcome c = run_command({"canon", fixture("I5.json"), fixture("zero5.json"), "--out", dir.string()});
  EXPECT_EQ(c.exit_code, kExitNumerical);
  EXPECT_NE(c.message.find("NotSelfAdjoint"), std::string::npos);
  EXPECT_EQ(run_command({"classify", fixture("I5.json"), fixture("zero5.json")}).exit_code, kExitNumerical);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run_command({}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"frobnicate"}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"check", fixture("C5.json")}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"check", fixture("C5.json"), "/nonexistent.json"}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"check", fixture("C5.json"), fixture("periodic_A.json")}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"generate", "--order", "5", "--unit-cosines", "3"}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"generate", "--order", "1"}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"generate"}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"check", fixture("I5.json"), fixture("I5.json"), "--format", "xml"}).exit_code,
            kExitInput);
  EXPECT_EQ(run_command({"check", fixture("I5.json"), fixture("I5.json"), "--tol", "2"}).exit_code, kExitInput);
  EXPECT_EQ(run_command({"selftest", "--orders", "5,x"}).exit_code, kExitInput);
}

TEST(Cli, ToleranceFlagAndEnvironment) {
  // (I5, 0) has gram residual sqrt(5); a loose tolerance turns the verdict.
  const std::vector<std::string> base = {"check", fixture("I5.json"), fixture("zero5.json")};
  ::setenv("BC_CANON_TOL", "0.5", 1);
  EXPECT_EQ(run_command(base).exit_code, kExitCriterion);
  ::setenv("BC_CANON_TOL", "abc", 1);
  EXPECT_EQ(run_command(base).exit_code, kExitInput);
  auto with_flag = base;
  with_flag.insert(with_flag.end(), {"--tol", "1e-3"});
  EXPECT_EQ(run_command(with_flag).exit_code, kExitCriterion);  // flag wins over bad env
  ::unsetenv("BC_CANON_TOL");

  // Make a pair whose residual sits between the default and a loose bound.
  const auto dir = fresh_dir("tol");
  ComplexMatrix a = ComplexMatrix::Identity(3, 3);
  ComplexMatrix b = ComplexMatrix::Identity(3, 3);
  b(0, 0) += 1e-6;
  write_matrix_file((dir / "A.json").string(), a);
  write_matrix_file((dir / "B.json").string(), b);
  const std::vector<std::string> near = {"check", (dir / "A.json").string(), (dir / "B.json").string()};
  EXPECT_EQ(run_command(near).exit_code, kExitCriterion);
  ::setenv("BC_CANON_TOL", "1e-4", 1);
  EXPECT_EQ(run_command(near).exit_code, kExitOk);
  auto strict = near;
  strict.insert(strict.end(), {"--tol", "1e-9"});
  EXPECT_EQ(run_command(strict).exit_code, kExitCriterion);
  ::unsetenv("BC_CANON_TOL");
}

TEST(Cli, SelftestSmall) {
  const CommandOutcome c = run_command({"selftest", "--orders", "3,4,5", "--trials", "4"});
  EXPECT_EQ(c.exit_code, kExitOk) << format_report(c.report, ReportFormat::Text);
  EXPECT_EQ(c.report.verdict, "pass");
  EXPECT_EQ(c.report.metrics.at("failures"), 0);
}

TEST(Cli, SelftestCoversEveryInvariant) {
  const SelftestSummary s = run_selftest({3, 5, 4}, 3);
  for (const char* name :
       {"csd.round_trip", "csd.cos_matches_block_svd", "csd.corner_unitarity", "csd.cos2_plus_sin2",
        "bvp.closure", "bvp.row_op_invariance", "bvp.rank_equality", "bvp.rank_bounds",
        "bvp.predicted_vs_numeric_rank", "bvp.canonical_reconstruction", "bvp.canonical_row_space",
        "bvp.classification_dichotomy", "even.trichotomy", "even.reconstruction", "even.separated_rows"}) {
    ASSERT_TRUE(s.tallies.count(name)) << name;
    EXPECT_GT(s.tallies.at(name).checks, 0) << name;
  }
}

TEST(CliBinary, ExitCodes) {
  const auto dir = fresh_dir("binary");
  const std::string a = (dir / "A.json").string();
  const std::string b = (dir / "B.json").string();
  EXPECT_EQ(run_binary("generate --order 7 --seed 3 --unit-cosines 1 --out " + dir.string()), 0);
  EXPECT_EQ(run_binary("check " + a + " " + b), 0);
  EXPECT_EQ(run_binary("canon " + a + " " + b + " --out " + (dir / "canon").string()), 0);
  EXPECT_EQ(run_binary("classify --format json " + a + " " + b), 0);
  EXPECT_EQ(run_binary("check " + fixture("I5.json") + " " + fixture("zero5.json")), 1);
  EXPECT_EQ(run_binary("check " + fixture("I5.json")), 2);
  EXPECT_EQ(run_binary("classify " + fixture("I5.json") + " " + fixture("zero5.json")), 3);
  EXPECT_EQ(run_binary("--help"), 0);
}

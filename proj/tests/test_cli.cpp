// Runs the built command-line tool end to end on a small problem.

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ocpdmd/snapshots.hpp"
#include "test_util.hpp"

namespace ocpdmd {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult Cli(const std::string& args, const fs::path& scratch) {
  const fs::path log = scratch / "stdout.txt";
  const std::string cmd = std::string(OCPDMD_CLI) + " " + args + " > " + log.string() + " 2> " +
                          (scratch / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small Graetz-type problem: 7x5 grid, 20 steps.
void WriteConfig(const fs::path& path) {
  std::ofstream(path) << json{{"preset", "graetz_analog"}, {"nx", 7}, {"ny", 5}, {"n_steps", 20}}.dump();
}

// fom -> fit -> reconstruct -> predict -> sweep in a fresh directory.
void Pipeline(const fs::path& root) {
  WriteConfig(root / "config.json");
  const std::string r = root.string();
  ASSERT_EQ(Cli("fom --config " + r + "/config.json --out " + r + "/fom", root).code, 0);
  ASSERT_EQ(Cli("fit --fom-manifest " + r + "/fom/manifest.json --train 15 --ranks 3 2 --out " + r + "/fit", root).code,
            0);
  ASSERT_EQ(Cli("reconstruct --model " + r + "/fit/model.json --fom-manifest " + r + "/fom/manifest.json --out " + r +
                    "/rec",
                root)
                .code,
            0);
  ASSERT_EQ(Cli("predict --model " + r + "/fit/model.json --fom-manifest " + r + "/fom/manifest.json --steps 5 --out " +
                    r + "/pred",
                root)
                .code,
            0);
  ASSERT_EQ(Cli("sweep --fom-manifest " + r + "/fom/manifest.json --ranks 3 2 --sizes 8 10 12 --test 6 --out " + r +
                    "/sweep",
                root)
                .code,
            0);
}

TEST(Cli, PipelineProducesConsistentOutputs) {
  testing::ScratchDir dir("cli_pipeline");
  Pipeline(dir.path());
  if (HasFatalFailure()) return;

  const json manifest = json::parse(Slurp(dir / "fom/manifest.json"));
  EXPECT_EQ(manifest.at("n_time"), 21);
  EXPECT_EQ(manifest.at("kkt_dimension"), 20 * (2 * manifest.at("n_y").get<int>() + manifest.at("n_u").get<int>()));
  EXPECT_LE(manifest.at("kkt_residual").get<double>(), 1e-12);

  const SnapshotMatrix state = load(dir / "fom/state.snp");
  EXPECT_EQ(state.n_time(), 21);
  EXPECT_DOUBLE_EQ(state.dt(), 0.02);

  const SnapshotMatrix forecast = load(dir / "pred/state_prediction.snp");
  EXPECT_EQ(forecast.n_time(), 5);
  EXPECT_NEAR(forecast.t0(), 15 * 0.02, 1e-12);

  const std::string sweep_csv = Slurp(dir / "sweep/sweep_state.csv");
  EXPECT_EQ(sweep_csv.rfind("train_size,mean_error\n", 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "sweep/sweep_control.csv"));
  EXPECT_TRUE(fs::exists(dir / "rec/errors_state.csv"));

  const CliResult ok = Cli("predict --model " + (dir / "fit/model.json").string() + " --fom-manifest " +
                         (dir / "fom/manifest.json").string() + " --steps 3 --out " + (dir / "pred3").string(),
                     dir.path());
  EXPECT_EQ(json::parse(ok.out).at("status"), "ok");
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  testing::ScratchDir a("cli_repeat_a");
  testing::ScratchDir b("cli_repeat_b");
  Pipeline(a.path());
  Pipeline(b.path());
  if (HasFatalFailure()) return;
  for (const char* file : {"fom/state.snp", "fom/adjoint.snp", "fom/control.snp", "fom/desired.snp",
                           "fit/model_state_basis.snp", "pred/state_prediction.snp", "pred/adjoint_prediction.snp",
                           "rec/state_reconstruction.snp", "rec/errors_state.csv", "sweep/sweep_state.csv",
                           "sweep/sweep_adjoint.csv"}) {
    ASSERT_TRUE(fs::exists(a / file)) << file;
    EXPECT_EQ(Slurp(a / file), Slurp(b / file)) << file;
  }
}

TEST(Cli, ExitCodes) {
  testing::ScratchDir dir("cli_codes");
  const std::string d = dir.path().string();
  EXPECT_EQ(Cli("", dir.path()).code, 2);
  EXPECT_EQ(Cli("fom --preset nonsense --out " + d + "/x", dir.path()).code, 2);
  EXPECT_FALSE(fs::exists(dir / "x"));
  EXPECT_EQ(Cli("fom --out " + d + "/x", dir.path()).code, 2);
  EXPECT_EQ(Cli("fit --state " + d + "/missing.snp --adjoint a --desired b --alpha 1 --out " + d + "/y", dir.path()).code,
            2);

  // A zero adjoint has no basis to fit.
  Eigen::MatrixXd y(3, 6);
  for (int k = 0; k < 6; ++k) y.col(k) = Eigen::Vector3d(1, 2, 3) * std::pow(0.9, k);
  save(SnapshotMatrix(y, 0.1), dir / "s.snp");
  save(SnapshotMatrix(Eigen::MatrixXd::Zero(3, 6), 0.1), dir / "z.snp");
  save(SnapshotMatrix(Eigen::MatrixXd::Ones(3, 6), 0.1), dir / "d.snp");
  const CliResult failed = Cli("fit --state " + d + "/s.snp --adjoint " + d + "/z.snp --desired " + d +
                             "/d.snp --alpha 1 --out " + d + "/fit",
                         dir.path());
  EXPECT_EQ(failed.code, 4);
  EXPECT_EQ(json::parse(failed.out).at("status"), "error");
  EXPECT_NE(failed.out.find("rank zero"), std::string::npos);
}

}  // namespace
}  // namespace ocpdmd

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

// Drives the built `monge` binary (path in the MONGE_CLI env var) through its
// subcommands and exit-code contract.

namespace fs = std::filesystem;
using namespace monge;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("monge_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string cliPath() {
  const char* p = std::getenv("MONGE_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int runCommand(const std::string& args) {
  const std::string cmd = cliPath() + " " + args + " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("gen writes parseable cone members") {
  TempDir tmp;
  const auto out = (tmp.path / "theta2.csv").string();
  CHECK(runCommand("gen --family theta2 --n 8 --v 1 --out " + out) == 0);
  const MatrixXd m = readCsvMatrixFile(out);
  CHECK(m.rows() == 8);
  CHECK(m.cols() == 8);
  CHECK(isAntiMonge(m, 1e-12));

  CHECK(runCommand("gen --family random --n 5 --n2 7 --scale 1 --seed 3 --out " +
                   (tmp.path / "r.csv").string()) == 0);
  CHECK(isAntiMonge(readCsvMatrixFile((tmp.path / "r.csv").string()), 1e-12));

  CHECK(runCommand("gen --family nosuch --n 4 --out " + (tmp.path / "x.csv").string()) == 1);
}

TEST_CASE("project fixes feasible inputs and flags budget exhaustion") {
  TempDir tmp;
  const auto in = (tmp.path / "in.csv").string();
  const auto out = (tmp.path / "out.csv").string();

  writeCsvMatrixFile(in, genTheta2<double>(6, 1.0));
  CHECK(runCommand("project --input " + in + " --output " + out) == 0);
  CHECK((readCsvMatrixFile(out) - readCsvMatrixFile(in)).cwiseAbs().maxCoeff() < 1e-12);

  SeededRng rng(81);
  writeCsvMatrixFile(in, testutil::randomGaussianMatrix(6, 6, rng));
  CHECK(runCommand("project --input " + in + " --output " + out + " --max-sweeps 1") == 2);
  CHECK(runCommand("project --input " + tmp.path.string() + "/missing.csv --output " + out) == 1);

  // capped projection obeys the corner bound
  writeCsvMatrixFile(in, genTheta2<double>(6, 2.0));
  CHECK(runCommand("project --input " + in + " --output " + out + " --vmax 0.5") == 0);
  CHECK(variation(readCsvMatrixFile(out)) <= 0.5 + 1e-6);
}

TEST_CASE("denoise methods run and validate their inputs") {
  TempDir tmp;
  const auto in = (tmp.path / "noisy.csv").string();
  const auto out = (tmp.path / "est.csv").string();
  SeededRng rng(82);
  const MatrixXd truth = genTheta2<double>(10, 1.0);
  writeCsvMatrixFile(in, truth + gaussianNoise<double>(10, 10, 0.1, rng));

  CHECK(runCommand("denoise --method ls --input " + in + " --output " + out) == 0);
  CHECK(isAntiMonge(readCsvMatrixFile(out), 1e-6));

  CHECK(runCommand("denoise --method svt-hard --sigma 0.1 --input " + in + " --output " + out) == 0);
  CHECK(runCommand("denoise --method svt-soft --sigma 0.1 --input " + in + " --output " + out) == 0);
  CHECK(runCommand("denoise --method vsort --vmax 1 --input " + in + " --output " + out) == 0);
  const MatrixXd est = readCsvMatrixFile(out);
  CHECK((est - truth).squaredNorm() / 100.0 < 0.05);

  CHECK(runCommand("denoise --method svt-hard --input " + in + " --output " + out) == 1);
  CHECK(runCommand("denoise --method nosuch --input " + in + " --output " + out) == 1);

  std::ofstream ragged(tmp.path / "ragged.csv");
  ragged << "1,2,3\n4,5\n";
  ragged.close();
  CHECK(runCommand("denoise --method ls --input " + (tmp.path / "ragged.csv").string() +
                   " --output " + out) == 1);
}

TEST_CASE("experiment subcommand produces results and report files") {
  TempDir tmp;
  const auto specPath = (tmp.path / "spec.json").string();
  const auto outDir = (tmp.path / "results").string();

  ExperimentSpec spec;
  spec.family = Family::Theta2;
  spec.estimator = EstimatorKind::SvtHard;
  spec.sweepName = "n";
  spec.sweepValues = {8, 16};
  spec.sigma = 0.1;
  spec.replicates = 3;
  spec.seed = 99;
  {
    std::ofstream out(specPath);
    out << toJson(spec).dump(2);
  }

  CHECK(runCommand("experiment --spec " + specPath + " --out-dir " + outDir) == 0);
  REQUIRE(fs::exists(fs::path(outDir) / "results.csv"));
  REQUIRE(fs::exists(fs::path(outDir) / "report.json"));

  std::ifstream report(fs::path(outDir) / "report.json");
  nlohmann::json j;
  report >> j;
  CHECK(j["n_failed"] == 0);
  CHECK(j["points"].size() == 2);
  CHECK(j["spec"]["estimator"] == "svt-hard");

  // strict mode converts sweep exhaustion into exit code 2
  ExperimentSpec hopeless = spec;
  hopeless.estimator = EstimatorKind::LsDykstra;
  hopeless.dykstra.maxSweeps = 1;
  hopeless.dykstra.feasTol = 0;
  hopeless.dykstra.driftTol = 0;
  {
    std::ofstream out(specPath);
    out << toJson(hopeless).dump(2);
  }
  CHECK(runCommand("experiment --spec " + specPath + " --out-dir " + outDir) == 2);
  CHECK(runCommand("experiment --spec " + specPath + " --out-dir " + outDir + " --exploratory") == 0);

  CHECK(runCommand("experiment --dump-preset ls-n-scaling --out-dir " + outDir) == 0);
  CHECK(runCommand("experiment --dump-preset nosuch --out-dir " + outDir) == 1);
  CHECK(runCommand("experiment --out-dir " + outDir) == 1);
}

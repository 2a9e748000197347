// Command-line front end for the anti-Monge estimation toolkit.
//
// Subcommands:
//   gen         write a synthetic ground-truth matrix (CSV)
//   project     Euclidean projection onto the anti-Monge cone (Dykstra)
//   denoise     run one of the denoisers on a noisy matrix
//   experiment  run a rate experiment from a JSON spec or named preset
//
// Exit codes: 0 success, 1 invalid input, 2 non-convergence in strict mode.

#include "monge/monge.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace monge;

void writeMatrixTo(const std::string& path, const MatrixXd& m) {
  if (path.empty() || path == "-") {
    writeCsvMatrix(std::cout, m);
  } else {
    writeCsvMatrixFile(path, m);
  }
}

int runGen(const std::string& family, Index n, Index n2, double v, double sigma, double scale,
           std::uint64_t seed, const std::string& out) {
  if (n2 <= 0) n2 = n;
  MatrixXd m;
  if (family == "theta1") {
    m = genTheta1<double>(n, v, sigma);
  } else if (family == "theta2") {
    m = genTheta2<double>(n, v);
  } else if (family == "worstcase") {
    m = worstCaseMatrix<double>(n, v);
  } else if (family == "random") {
    SeededRng rng(seed);
    m = randomAntiMonge<double>(n, n2, scale, rng).matrix;
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }
  writeMatrixTo(out, m);
  return 0;
}

int runProject(const std::string& input, const std::string& output, const DykstraConfig& cfg) {
  const MatrixXd y = readCsvMatrixFile(input);
  const auto result = projectAntiMonge(y, cfg);
  writeMatrixTo(output, result.estimate);
  std::fprintf(stderr, "sweeps=%ld feasibility_gap=%.3e drift=%.3e converged=%s\n", result.sweepsUsed,
               result.finalFeasibilityGap, result.finalDrift, result.converged ? "true" : "false");
  return result.converged ? 0 : 2;
}

int runDenoise(const std::string& method, const std::string& input, const std::string& output,
               std::optional<double> sigma, std::optional<double> vmax, double svtC,
               std::optional<double> rho, const DykstraConfig& cfg) {
  const MatrixXd y = readCsvMatrixFile(input);
  MatrixXd estimate;
  bool converged = true;
  if (method == "ls") {
    DykstraConfig c = cfg;
    c.vMax = vmax ? vmax : cfg.vMax;
    const auto result = projectAntiMonge(y, c);
    converged = result.converged;
    estimate = result.estimate;
  } else if (method == "vsort") {
    const auto result = mainAlgorithm(y, vmax, cfg);
    converged = result.converged;
    estimate = result.estimate;
  } else if (method == "svt-hard" || method == "svt-soft") {
    SvtConfig c;
    c.rho = rho;
    c.c = svtC;
    c.sigma = sigma;
    estimate = method == "svt-hard" ? svtHard(y, c) : svtSoft(y, c);
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  writeMatrixTo(output, estimate);
  if (!converged) {
    std::fprintf(stderr, "projection did not converge within the sweep budget\n");
    return 2;
  }
  return 0;
}

int runExperimentCmd(const std::string& specPath, const std::string& presetName,
                     const std::string& outDir, bool strict, int threads,
                     const std::string& dumpPreset) {
  if (!dumpPreset.empty()) {
    const auto& table = presets();
    const auto it = table.find(dumpPreset);
    if (it == table.end()) throw std::invalid_argument("unknown preset: " + dumpPreset);
    std::cout << toJson(it->second.spec).dump(2) << "\n";
    return 0;
  }

  ExperimentSpec spec;
  std::vector<std::string> notes;
  if (!presetName.empty()) {
    const auto& table = presets();
    const auto it = table.find(presetName);
    if (it == table.end()) {
      std::string known;
      for (const auto& [name, preset] : table) known += "\n  " + name + ": " + preset.description;
      throw std::invalid_argument("unknown preset: " + presetName + "; available presets:" + known);
    }
    spec = it->second.spec;
    notes.push_back("preset: " + presetName + " (" + it->second.description + ")");
  } else if (!specPath.empty()) {
    std::ifstream in(specPath);
    if (!in) throw std::invalid_argument("cannot open spec file: " + specPath);
    nlohmann::json j;
    in >> j;
    spec = specFromJson(j);
  } else {
    throw std::invalid_argument("experiment requires --spec or --preset");
  }

  SlopeReport report = runExperiment(spec, strict, threads);
  report.notes = notes;

  std::filesystem::create_directories(outDir);
  {
    std::ofstream out(std::filesystem::path(outDir) / "results.csv");
    writeResultsCsv(out, report, spec.replicates);
  }
  {
    std::ofstream out(std::filesystem::path(outDir) / "report.json");
    out << reportToJson(report, spec).dump(2) << "\n";
  }
  std::printf("global_slope=%.4f consecutive=[", report.globalSlope);
  for (size_t i = 0; i < report.consecutiveSlopes.size(); ++i) {
    std::printf("%s%.4f", i ? ", " : "", report.consecutiveSlopes[i]);
  }
  std::printf("] n_failed=%ld\n", report.nFailed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anti-Monge matrix estimation toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a ground-truth matrix as CSV");
  std::string genFamily, genOut;
  Index genN = 0, genN2 = 0;
  double genV = 1, genSigma = 1, genScale = 1;
  std::uint64_t genSeed = 0;
  gen->add_option("--family", genFamily, "theta1|theta2|worstcase|random")->required();
  gen->add_option("--n", genN, "matrix size (rows)")->required();
  gen->add_option("--n2", genN2, "columns for family=random (default: n)");
  gen->add_option("--v", genV, "variation parameter V (V0 for worstcase)");
  gen->add_option("--sigma", genSigma, "noise scale entering the theta1 staircase");
  gen->add_option("--scale", genScale, "increment scale for family=random");
  gen->add_option("--seed", genSeed, "RNG seed for family=random");
  gen->add_option("--out", genOut, "output CSV path (default: stdout)");

  // shared Dykstra knobs
  const auto addDykstraOptions = [](CLI::App* cmd, DykstraConfig& cfg) {
    cmd->add_option("--feas-tol", cfg.feasTol, "feasibility tolerance on the second differences");
    cmd->add_option("--drift-tol", cfg.driftTol, "between-sweep Frobenius drift tolerance");
    cmd->add_option("--max-sweeps", cfg.maxSweeps, "sweep budget");
  };

  // project
  auto* project = app.add_subcommand("project", "project a matrix onto the anti-Monge cone");
  std::string projIn, projOut;
  DykstraConfig projCfg;
  double projVmax = -1;
  project->add_option("--input", projIn, "input CSV matrix")->required();
  project->add_option("--output", projOut, "output CSV path (default: stdout)");
  project->add_option("--vmax", projVmax, "variation cap V0 (projects onto the capped cone)");
  addDykstraOptions(project, projCfg);

  // denoise
  auto* denoise = app.add_subcommand("denoise", "estimate the signal matrix from a noisy one");
  std::string denMethod, denIn, denOut;
  DykstraConfig denCfg;
  double denSigma = -1, denVmax = -1, denC = 2.0, denRho = -1;
  denoise->add_option("--method", denMethod, "ls|vsort|svt-hard|svt-soft")->required();
  denoise->add_option("--input", denIn, "input CSV matrix")->required();
  denoise->add_option("--output", denOut, "output CSV path (default: stdout)");
  denoise->add_option("--sigma", denSigma, "noise level (required for svt-* scaled threshold)");
  denoise->add_option("--vmax", denVmax, "variation cap V0 for ls/vsort");
  denoise->add_option("--svt-c", denC, "scaled threshold constant (rho = c sigma sqrt(n))");
  denoise->add_option("--rho", denRho, "explicit SVT threshold, overrides --sigma/--svt-c");
  addDykstraOptions(denoise, denCfg);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a rate experiment");
  std::string expSpec, expPreset, expOutDir = "experiment-out", expDump;
  bool expStrict = true, expExploratory = false;
  int expThreads = 0;
  experiment->add_option("--spec", expSpec, "JSON experiment spec");
  experiment->add_option("--preset", expPreset, "named preset (see --dump-preset)");
  experiment->add_option("--out-dir", expOutDir, "directory for results.csv and report.json");
  experiment->add_flag("--strict", expStrict, "abort on any non-converged projection (default)");
  experiment->add_flag("--exploratory", expExploratory, "record non-convergence and continue");
  experiment->add_option("--threads", expThreads, "work-pool size (default: hardware)");
  experiment->add_option("--dump-preset", expDump, "print a preset spec as JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return runGen(genFamily, genN, genN2, genV, genSigma, genScale, genSeed, genOut);
    if (project->parsed()) {
      if (projVmax >= 0) projCfg.vMax = projVmax;
      return runProject(projIn, projOut, projCfg);
    }
    if (denoise->parsed()) {
      return runDenoise(denMethod, denIn, denOut,
                        denSigma >= 0 ? std::optional<double>(denSigma) : std::nullopt,
                        denVmax >= 0 ? std::optional<double>(denVmax) : std::nullopt, denC,
                        denRho >= 0 ? std::optional<double>(denRho) : std::nullopt, denCfg);
    }
    if (experiment->parsed()) {
      return runExperimentCmd(expSpec, expPreset, expOutDir, expStrict && !expExploratory, expThreads,
                              expDump);
    }
  } catch (const monge::NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

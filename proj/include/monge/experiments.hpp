#pragma once

#include "monge/estimators.hpp"
#include "monge/geometry.hpp"
#include "monge/projection.hpp"
#include "monge/svt.hpp"
#include "monge/synthetic.hpp"
#include "monge/types.hpp"

#include "json.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace monge {

enum class Family { Theta1, Theta2, WorstCase };
enum class EstimatorKind { LsDykstra, VsortPermError, VsortFull, SvtHard, SvtSoft, GlsOracle };

inline std::string toString(Family f) {
  switch (f) {
    case Family::Theta1: return "theta1";
    case Family::Theta2: return "theta2";
    case Family::WorstCase: return "worstcase";
  }
  throw std::logic_error("unreachable");
}

inline Family familyFromString(const std::string& s) {
  if (s == "theta1") return Family::Theta1;
  if (s == "theta2") return Family::Theta2;
  if (s == "worstcase") return Family::WorstCase;
  throw std::invalid_argument("unknown family: " + s);
}

inline std::string toString(EstimatorKind e) {
  switch (e) {
    case EstimatorKind::LsDykstra: return "ls-dykstra";
    case EstimatorKind::VsortPermError: return "vsort-perm-error";
    case EstimatorKind::VsortFull: return "vsort-full";
    case EstimatorKind::SvtHard: return "svt-hard";
    case EstimatorKind::SvtSoft: return "svt-soft";
    case EstimatorKind::GlsOracle: return "gls-oracle";
  }
  throw std::logic_error("unreachable");
}

inline EstimatorKind estimatorFromString(const std::string& s) {
  if (s == "ls-dykstra") return EstimatorKind::LsDykstra;
  if (s == "vsort-perm-error") return EstimatorKind::VsortPermError;
  if (s == "vsort-full") return EstimatorKind::VsortFull;
  if (s == "svt-hard") return EstimatorKind::SvtHard;
  if (s == "svt-soft") return EstimatorKind::SvtSoft;
  if (s == "gls-oracle") return EstimatorKind::GlsOracle;
  throw std::invalid_argument("unknown estimator: " + s);
}

/// Declarative description of one rate experiment: sweep one parameter over a
/// grid, hold the rest fixed, average the error metric over seeded replicates.
struct ExperimentSpec {
  Family family = Family::Theta1;
  EstimatorKind estimator = EstimatorKind::LsDykstra;
  std::string sweepName = "n";  ///< one of "n", "v", "sigma"
  std::vector<double> sweepValues;
  double n = 0;  ///< fixed parameters; the swept one is ignored
  double v = 1;
  double sigma = 1;
  std::optional<double> v0;  ///< variation cap for vsort-full / gls-oracle; defaults to v
  double svtConstant = 2.0;
  int replicates = 20;
  std::uint64_t seed = 0;
  DykstraConfig dykstra;

  void validate() const {
    if (sweepName != "n" && sweepName != "v" && sweepName != "sigma") {
      throw std::invalid_argument("ExperimentSpec: sweep name must be n, v or sigma");
    }
    if (sweepValues.empty()) throw std::invalid_argument("ExperimentSpec: empty sweep");
    double prev = 0;
    for (double x : sweepValues) {
      if (x <= prev) throw std::invalid_argument("ExperimentSpec: sweep values must be strictly increasing and positive");
      prev = x;
    }
    if (replicates < 1) throw std::invalid_argument("ExperimentSpec: replicates must be at least 1");
    if (v0 && *v0 < 0) throw std::invalid_argument("ExperimentSpec: v0 must be nonnegative");
    dykstra.validate();
  }
};

struct SlopePoint {
  double param = 0;
  double meanError = 0;
  double standardError = 0;
};

/// Fitted log-log rates for one experiment.
struct SlopeReport {
  std::vector<SlopePoint> points;
  double globalSlope = 0;                 ///< OLS of log(error) on log(param)
  std::vector<double> consecutiveSlopes;  ///< slope between each adjacent pair
  long nFailed = 0;                       ///< replicates with a non-converged projection
  std::vector<std::string> notes;
};

/// OLS slope of log y on log x plus the slopes between adjacent points.
/// Throws on fewer than two points or any nonpositive coordinate.
inline std::pair<double, std::vector<double>> fitLoglogSlope(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("fitLoglogSlope: need at least 2 points");
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (x <= 0 || y <= 0) throw std::invalid_argument("fitLoglogSlope: coordinates must be positive");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const auto n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  std::vector<double> consecutive;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    consecutive.push_back((ly[i + 1] - ly[i]) / (lx[i + 1] - lx[i]));
  }
  return {sxy / sxx, consecutive};
}

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct PointParams {
  Index n = 0;
  double v = 1;
  double sigma = 1;
  std::optional<double> v0;
  double svtConstant = 2.0;
};

inline PointParams pointParams(const ExperimentSpec& spec, double sweepValue) {
  PointParams p;
  p.n = static_cast<Index>(std::llround(spec.sweepName == "n" ? sweepValue : spec.n));
  p.v = spec.sweepName == "v" ? sweepValue : spec.v;
  p.sigma = spec.sweepName == "sigma" ? sweepValue : spec.sigma;
  p.v0 = spec.v0;
  p.svtConstant = spec.svtConstant;
  if (p.n < 2) throw std::invalid_argument("experiment: n must be at least 2");
  return p;
}

inline MatrixXd groundTruth(Family family, const PointParams& p) {
  switch (family) {
    case Family::Theta1: return genTheta1<double>(p.n, p.v, p.sigma);
    case Family::Theta2: return genTheta2<double>(p.n, p.v);
    case Family::WorstCase: return worstCaseMatrix<double>(p.n, p.v);
  }
  throw std::logic_error("unreachable");
}

/// Projection stopping tolerances for experiment sweeps are measured in units
/// of the point's noise level: the violations Dykstra has to clean up are
/// O(sigma) regardless of n or V (the cone is scale invariant), so a fixed
/// relative tolerance costs a roughly constant number of sweeps per point and
/// keeps the early-stopping bias a near-uniform multiplicative factor, which
/// cancels in fitted log-log slopes. With sigma = 1 this is the plain
/// absolute config.
inline DykstraConfig scaledToNoise(const DykstraConfig& cfg, double sigma) {
  DykstraConfig scaled = cfg;
  scaled.feasTol = cfg.feasTol * sigma;
  scaled.driftTol = cfg.driftTol * sigma;
  return scaled;
}

/// One replicate of the configured estimator; returns the error metric.
/// Matrix estimators report the denoising error |est - theta*|_F^2 / n^2,
/// vsort-perm-error reports the flip-minimized permutation error.
inline double evaluateReplicate(const ExperimentSpec& spec, const PointParams& p,
                                std::uint64_t streamId, bool& converged) {
  converged = true;
  SeededRng rng(spec.seed, streamId);
  const MatrixXd truth = groundTruth(spec.family, p);
  const MatrixXd noisy = truth + gaussianNoise<double>(p.n, p.n, p.sigma, rng);
  const double cells = static_cast<double>(p.n) * static_cast<double>(p.n);
  const double vCap = p.v0 ? *p.v0 : p.v;

  switch (spec.estimator) {
    case EstimatorKind::LsDykstra: {
      const auto fit = projectAntiMonge(noisy, scaledToNoise(spec.dykstra, p.sigma));
      converged = fit.converged;
      return (fit.estimate - truth).squaredNorm() / cells;
    }
    case EstimatorKind::VsortPermError: {
      const auto rows = varianceSort(noisy);
      const auto cols = varianceSort(noisy.transpose());
      return permApproxError(truth, rows.piHat, cols.piHat);
    }
    case EstimatorKind::VsortFull: {
      const auto fit = mainAlgorithm(noisy, vCap, scaledToNoise(spec.dykstra, p.sigma));
      converged = fit.converged;
      return (fit.estimate - truth).squaredNorm() / cells;
    }
    case EstimatorKind::SvtHard:
    case EstimatorKind::SvtSoft: {
      SvtConfig cfg;
      cfg.c = p.svtConstant;
      cfg.sigma = p.sigma;
      const MatrixXd est =
          spec.estimator == EstimatorKind::SvtHard ? svtHard(noisy, cfg) : svtSoft(noisy, cfg);
      return (est - truth).squaredNorm() / cells;
    }
    case EstimatorKind::GlsOracle: {
      const auto fit = bruteForceGls(noisy, vCap, scaledToNoise(spec.dykstra, p.sigma));
      converged = fit.converged;
      return (fit.estimate - truth).squaredNorm() / cells;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Run the sweep with an injected per-replicate evaluator. Replicates execute
/// in a small work pool; every (point, replicate) task owns the RNG stream
/// pointIndex * replicates + replicate and writes into its own slot, so the
/// aggregation below is identical no matter how the pool schedules work.
inline SlopeReport runExperimentWith(
    const ExperimentSpec& spec,
    const std::function<double(const detail::PointParams&, std::uint64_t, bool&)>& evaluate,
    bool strict = true, int threads = 0) {
  spec.validate();
  const size_t nPoints = spec.sweepValues.size();
  const size_t reps = static_cast<size_t>(spec.replicates);
  std::vector<double> errors(nPoints * reps, 0.0);
  std::vector<char> failed(nPoints * reps, 0);

  std::atomic<size_t> nextTask{0};
  std::atomic<bool> abort{false};
  std::string firstError;
  std::mutex errorMutex;

  const auto worker = [&]() {
    for (;;) {
      const size_t t = nextTask.fetch_add(1);
      if (t >= nPoints * reps || abort.load()) return;
      const size_t pt = t / reps;
      try {
        const detail::PointParams p = detail::pointParams(spec, spec.sweepValues[pt]);
        bool converged = true;
        errors[t] = evaluate(p, static_cast<std::uint64_t>(t), converged);
        if (!converged) {
          failed[t] = 1;
          if (strict) abort.store(true);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(errorMutex);
        if (firstError.empty()) firstError = e.what();
        abort.store(true);
      }
    }
  };

  int nThreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nThreads < 1) nThreads = 1;
  if (nThreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nThreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!firstError.empty()) throw std::runtime_error("experiment replicate failed: " + firstError);

  SlopeReport report;
  for (size_t pt = 0; pt < nPoints; ++pt) {
    double sum = 0;
    for (size_t r = 0; r < reps; ++r) sum += errors[pt * reps + r];
    const double mean = sum / static_cast<double>(reps);
    double sq = 0;
    for (size_t r = 0; r < reps; ++r) {
      const double d = errors[pt * reps + r] - mean;
      sq += d * d;
    }
    const double sd = reps > 1 ? std::sqrt(sq / static_cast<double>(reps - 1)) : 0.0;
    report.points.push_back({spec.sweepValues[pt], mean, sd / std::sqrt(static_cast<double>(reps))});
  }
  for (char f : failed) report.nFailed += f;
  if (strict && report.nFailed > 0) {
    throw NonConvergenceError("experiment aborted: " + std::to_string(report.nFailed) +
                              " replicate(s) hit the sweep limit before converging");
  }

  if (report.points.size() >= 2) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& pt : report.points) xy.emplace_back(pt.param, pt.meanError);
    std::tie(report.globalSlope, report.consecutiveSlopes) = fitLoglogSlope(xy);
  } else {
    report.globalSlope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

inline SlopeReport runExperiment(const ExperimentSpec& spec, bool strict = true, int threads = 0) {
  return runExperimentWith(
      spec,
      [&spec](const detail::PointParams& p, std::uint64_t stream, bool& converged) {
        return detail::evaluateReplicate(spec, p, stream, converged);
      },
      strict, threads);
}

// ---------------------------------------------------------------------------
// JSON spec file format (field-for-field mirror of ExperimentSpec)
// ---------------------------------------------------------------------------

inline nlohmann::json toJson(const DykstraConfig& cfg) {
  nlohmann::json j{{"feas_tol", cfg.feasTol}, {"drift_tol", cfg.driftTol}, {"max_sweeps", cfg.maxSweeps}};
  j["v_max"] = cfg.vMax ? nlohmann::json(*cfg.vMax) : nlohmann::json(nullptr);
  return j;
}

inline DykstraConfig dykstraFromJson(const nlohmann::json& j) {
  DykstraConfig cfg;
  cfg.feasTol = j.value("feas_tol", cfg.feasTol);
  cfg.driftTol = j.value("drift_tol", cfg.driftTol);
  cfg.maxSweeps = j.value("max_sweeps", cfg.maxSweeps);
  if (j.contains("v_max") && !j["v_max"].is_null()) cfg.vMax = j["v_max"].get<double>();
  cfg.validate();
  return cfg;
}

inline nlohmann::json toJson(const ExperimentSpec& spec) {
  nlohmann::json fixed{{"n", spec.n}, {"v", spec.v}, {"sigma", spec.sigma}, {"c", spec.svtConstant}};
  fixed["v0"] = spec.v0 ? nlohmann::json(*spec.v0) : nlohmann::json(nullptr);
  return nlohmann::json{{"family", toString(spec.family)},
                        {"estimator", toString(spec.estimator)},
                        {"sweep", {{"name", spec.sweepName}, {"values", spec.sweepValues}}},
                        {"fixed", fixed},
                        {"replicates", spec.replicates},
                        {"seed", spec.seed},
                        {"dykstra", toJson(spec.dykstra)}};
}

inline ExperimentSpec specFromJson(const nlohmann::json& j) {
  ExperimentSpec spec;
  spec.family = familyFromString(j.at("family").get<std::string>());
  spec.estimator = estimatorFromString(j.at("estimator").get<std::string>());
  spec.sweepName = j.at("sweep").at("name").get<std::string>();
  spec.sweepValues = j.at("sweep").at("values").get<std::vector<double>>();
  const auto& fixed = j.at("fixed");
  spec.n = fixed.value("n", 0.0);
  spec.v = fixed.value("v", 1.0);
  spec.sigma = fixed.value("sigma", 1.0);
  spec.svtConstant = fixed.value("c", 2.0);
  if (fixed.contains("v0") && !fixed["v0"].is_null()) spec.v0 = fixed["v0"].get<double>();
  spec.replicates = j.at("replicates").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("dykstra")) spec.dykstra = dykstraFromJson(j["dykstra"]);
  spec.validate();
  return spec;
}

inline nlohmann::json reportToJson(const SlopeReport& report, const ExperimentSpec& spec) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : report.points) {
    pts.push_back({{"param", p.param},
                   {"mean_error", p.meanError},
                   {"stderr", p.standardError},
                   {"replicates", spec.replicates}});
  }
  return nlohmann::json{{"points", pts},
                        {"global_slope", report.globalSlope},
                        {"consecutive_slopes", report.consecutiveSlopes},
                        {"n_failed", report.nFailed},
                        {"notes", report.notes},
                        {"spec", toJson(spec)}};
}

inline void writeResultsCsv(std::ostream& out, const SlopeReport& report, int replicates) {
  out << "param,mean_error,stderr,replicates\n";
  char buf[128];
  for (const auto& p : report.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n", p.param, p.meanError, p.standardError,
                  replicates);
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// Named presets reproducing the benchmark sweeps
// ---------------------------------------------------------------------------

struct Preset {
  ExperimentSpec spec;
  std::string description;
  bool longRunning = false;
};

inline std::vector<double> geometricGrid(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return out;
}

inline const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = [] {
    std::map<std::string, Preset> t;

    {
      ExperimentSpec s;
      s.family = Family::Theta1;
      s.estimator = EstimatorKind::LsDykstra;
      s.sweepName = "n";
      s.sweepValues = {10, 20, 40, 80, 160};
      s.v = 1;
      s.sigma = 1;
      s.replicates = 20;
      s.seed = 42001;
      s.dykstra = {1e-3, 1e-3, 400000, std::nullopt};
      t["ls-n-scaling"] = {s, "least-squares denoising error vs n at V = sigma = 1 (expect slope near -1)"};
    }
    {
      ExperimentSpec s;
      s.family = Family::Theta1;
      s.estimator = EstimatorKind::LsDykstra;
      s.sweepName = "v";
      // half-decade spacing through the mid regime so local slopes resolve
      // the V^{2/3} growth instead of averaging across the plateaus
      s.sweepValues = {1e-2, 1e-1, 1,    10,     31.622776601683793, 100,
                       316.22776601683796, 1e3, 3162.2776601683795, 1e4,
                       31622.776601683792, 1e5, 1e6,                1e7};
      s.n = 200;
      s.sigma = 1;
      s.replicates = 20;
      s.seed = 42002;
      s.dykstra = {3e-3, 3e-3, 400000, std::nullopt};
      t["ls-v-scaling"] = {s, "least-squares error vs V at n = 200, sigma = 1 (mid-regime local slope near 2/3)"};
      s.n = 100;
      s.seed = 42003;
      t["ls-v-scaling-n100"] = {s, "reduced-size variant of ls-v-scaling for constrained runtime budgets"};
    }
    {
      ExperimentSpec s;
      s.family = Family::Theta1;
      s.estimator = EstimatorKind::LsDykstra;
      s.sweepName = "sigma";
      s.sweepValues = {1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1};
      s.n = 300;
      s.v = 1;
      s.replicates = 12;
      s.seed = 42004;
      s.dykstra = {3e-3, 3e-3, 400000, std::nullopt};
      t["ls-sigma-scaling"] = {s, "least-squares error vs sigma at n = 300, V = 1 (slopes near 2 at the ends, dip near 4/3)"};
    }
    {
      ExperimentSpec s;
      s.family = Family::Theta1;
      s.estimator = EstimatorKind::LsDykstra;
      s.sweepName = "n";
      s.sweepValues = {250, 500, 1000, 2000, 4000};
      s.v = 2e6;
      s.sigma = 1;
      s.replicates = 3;
      s.seed = 42005;
      s.dykstra = {3e-3, 3e-3, 400000, std::nullopt};
      t["ls-plateau"] = {s, "plateau regime at V = 2e6: flat error until n ~ sqrt(V), then decay toward n^{-4/3}",
                         true};
    }
    {
      ExperimentSpec s;
      s.family = Family::Theta2;
      s.estimator = EstimatorKind::VsortPermError;
      s.sweepName = "n";
      s.sweepValues = {32, 64, 128, 256, 512};
      s.v = 1;
      s.sigma = 0.5;
      s.replicates = 256;
      s.seed = 42006;
      t["vsort-perm-error"] = {s, "variance-sorting permutation error vs n at V = 1, sigma = 0.5 (upper-half slope near -1/2)"};
    }
    {
      ExperimentSpec s;
      s.family = Family::Theta2;
      s.estimator = EstimatorKind::SvtHard;
      s.sweepName = "n";
      s.sweepValues = {20, 32, 50, 79, 126, 199, 316, 500};
      s.v = 1;
      s.sigma = 0.1;
      s.svtConstant = 2.0;
      s.replicates = 64;
      s.seed = 42007;
      t["svt-denoising"] = {s, "hard-SVT denoising error vs n at V = 1, sigma = 0.1 (slope near -3/4)"};
    }
    return t;
  }();
  return table;
}

}  // namespace monge

#pragma once

// Orchestration behind the `sks` command line: ensembles, verification
// sweeps, convergence studies and constant calibration. Every study is a pure
// function of (config, seed); paths draw from disjoint RNG streams and may run
// concurrently.

#include "sks/config.hpp"
#include "sks/estimates.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sks {

inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_check_failure = 3,
    exit_numerical = 4,
};

struct RunOptions {
    std::uint64_t seed = 0;
    int paths = 1;
    std::filesystem::path out_dir = "sks_out";
    int levels = 4;
    int samples = 0;  // 0: use checks.calibration_samples
};

CalibrationResult calibrate(const RunConfig& cfg, std::uint64_t seed, int samples = 0);

// --- studies -----------------------------------------------------------------

/// One path of the ensemble: stream (seed, path:index).
GlobalSolution simulate_path(const RunConfig& cfg, const ConstantsLedger& ledger, std::uint64_t seed,
                             std::size_t index);

struct ConvergenceRow {
    double dt = 0.0;
    double error = 0.0;  // mean over paths of L_inf(0,T;H) distance to the finest level
    double order = 0.0;  // log2(error / next error); NaN on the last row
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double fitted_order = 0.0;  // least-squares slope of log error against log dt
};

/// Common-path dt-halving: w_A is drawn once per path on the finest grid and
/// subsampled for every coarser level. Requires levels >= 3.
ConvergenceStudy convergence_study(const RunConfig& cfg, std::uint64_t seed, int levels, int paths);

struct ScalingStudy {
    std::vector<double> deltas;                  // initial perturbation sizes
    std::vector<std::vector<double>> sup_diffs;  // [path][delta] sup_t ||y0 - y1||_{L4}
    std::vector<std::vector<double>> ratios;     // [path][i] sup_diffs[i] / sup_diffs[i+1]
    GronwallFit fit;
    std::vector<CheckReport> dependence;         // every perturbed pair against the pooled fit
};

/// Runs, per path, the base configuration, perturbed initial data
/// u0 + delta phi_1 for each delta, and a 10% noise-amplitude perturbation on
/// the same stream.
ScalingStudy dependence_study(const RunConfig& cfg, std::uint64_t seed, int paths,
                              const std::vector<double>& deltas = {1e-2, 1e-3, 1e-4});

/// Random path on the grid of `times` with E-norm radius * alpha, built from
/// calibration-family fields with a smooth random time profile.
FieldPath random_ball_path(const std::vector<double>& times, const DomainSpec& dom, double radius,
                           RngStream& rng);

struct LocalInterval {
    double tau = 0.0;
    double tau1 = 0.0;
    double step = 0.0;
    std::vector<double> times;
};

/// [0, min(tau1, T)] gridded with at least solver.local_min_steps steps.
LocalInterval local_interval(const RunConfig& cfg, const ConstantsLedger& ledger);

/// Every check of the verification suite, in a fixed order.
std::vector<CheckReport> verify_reports(const RunConfig& cfg, std::uint64_t seed, int paths);

// --- subcommands ---------------------------------------------------------------

struct SimulateOutputs {
    std::vector<std::filesystem::path> files;
};

SimulateOutputs run_simulate(const RunConfig& cfg, const RunOptions& opts);

/// Writes reports/<name>.json, report.json and summary.csv; returns the
/// reports. The caller maps any failing report to exit_check_failure.
std::vector<CheckReport> run_verify(const RunConfig& cfg, const RunOptions& opts);

ConvergenceStudy run_converge(const RunConfig& cfg, const RunOptions& opts);

CalibrationResult run_constants(const RunConfig& cfg, const RunOptions& opts);

}  // namespace sks

// sks: simulate, verify, converge, constants.

#include "sks/runner.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

int report_failures(const std::vector<sks::CheckReport>& reports) {
    int failures = 0;
    for (const auto& r : reports) {
        std::printf("%-28s %s  lhs=%.6g rhs=%.6g margin=%.6g\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.lhs,
                    r.rhs, r.margin);
        failures += r.pass ? 0 : 1;
    }
    return failures;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-Galerkin simulator for the stochastic Kuramoto-Sivashinsky equation"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    sks::RunOptions opts;
    std::string out_dir = opts.out_dir.string();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--seed", opts.seed, "master seed");
    app.add_option("--paths", opts.paths, "number of sample paths");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--levels", opts.levels, "dt-halving levels (converge)");
    app.add_option("--samples", opts.samples, "calibration samples (0: checks.calibration_samples)");

    auto* simulate = app.add_subcommand("simulate", "per-path norm series and manifest");
    auto* verify = app.add_subcommand("verify", "run every estimate check; exit 3 on any failure");
    auto* converge = app.add_subcommand("converge", "common-path dt-halving study");
    auto* constants = app.add_subcommand("constants", "calibrate the constants ledger");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? sks::exit_ok : sks::exit_config;
    }
    opts.out_dir = out_dir;

    try {
        sks::RunConfig cfg = config_path.empty() ? sks::RunConfig{} : sks::load_config(config_path);
        sks::apply_env_overrides(cfg);
        sks::validate(cfg);

        if (simulate->parsed()) {
            const auto out = sks::run_simulate(cfg, opts);
            std::printf("wrote %zu files to %s\n", out.files.size(), opts.out_dir.string().c_str());
        } else if (verify->parsed()) {
            const auto reports = sks::run_verify(cfg, opts);
            const int failures = report_failures(reports);
            if (failures > 0) {
                std::fprintf(stderr, "%d check(s) failed\n", failures);
                return sks::exit_check_failure;
            }
        } else if (converge->parsed()) {
            const auto study = sks::run_converge(cfg, opts);
            for (const auto& row : study.rows) std::printf("dt=%.6g error=%.6g order=%.4f\n", row.dt, row.error, row.order);
            std::printf("fitted order %.4f\n", study.fitted_order);
        } else if (constants->parsed()) {
            const auto cal = sks::run_constants(cfg, opts);
            std::printf("C1=%.6g C2=%.6g L=%.6g K=%.6g M=%.6g alpha=%.6g\n", cal.ledger.C1, cal.ledger.C2,
                        cal.ledger.L, cal.ledger.K, cal.ledger.M, cal.ledger.alpha);
        }
    } catch (const sks::ConfigError& e) {
        std::fprintf(stderr, "config error [%s]: %s\n", e.key().c_str(), e.what());
        return sks::exit_config;
    } catch (const sks::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return sks::exit_numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return sks::exit_numerical;
    }
    return sks::exit_ok;
}

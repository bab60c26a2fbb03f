#include "sks/runner.hpp"

#include "sks/io.hpp"
#include "sks/parallel.hpp"
#include "sks/path_norms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace sks {

CalibrationResult calibrate(const RunConfig& cfg, std::uint64_t seed, int samples) {
    CalibrationOptions opts;
    opts.samples = samples > 0 ? samples : cfg.calibration_samples;
    opts.horizon = cfg.horizon;
    return calibrate_constants(cfg.domain, seed, opts);
}

GlobalSolution simulate_path(const RunConfig& cfg, const ConstantsLedger& ledger, std::uint64_t seed,
                             std::size_t index) {
    RngStream rng(seed, stream_id(StreamPurpose::path, index));
    return solve_global(cfg.initial_condition(), cfg.horizon, cfg.domain, cfg.noise(), cfg.solver, ledger, rng);
}

// ---------------------------------------------------------------------------

namespace {

FieldPath subsample(const FieldPath& p, std::size_t stride) {
    FieldPath out;
    for (std::size_t i = 0; i < p.size(); i += stride) {
        out.times.push_back(p.times[i]);
        out.fields.push_back(p.fields[i]);
    }
    return out;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

ConvergenceStudy convergence_study(const RunConfig& cfg, std::uint64_t seed, int levels, int paths) {
    if (levels < 3) throw ConfigError("--levels", "convergence study needs at least 3 levels");
    if (paths < 1) throw ConfigError("--paths", "must be >= 1");
    const DomainSpec& dom = cfg.domain;
    const long coarse_steps = std::max(1L, std::lround(cfg.horizon / cfg.solver.dt));
    const double coarse_dt = cfg.horizon / static_cast<double>(coarse_steps);
    const std::size_t finest_factor = std::size_t{1} << (levels - 1);
    const double fine_dt = coarse_dt / static_cast<double>(finest_factor);
    const SpectralField u0 = cfg.initial_condition();
    const NoiseSpec noise = cfg.noise();

    // errors[path][level] for levels 0..levels-2
    std::vector<std::vector<double>> errors(static_cast<std::size_t>(paths));
    parallel_for(errors.size(), [&](std::size_t p) {
        RngStream rng(seed, stream_id(StreamPurpose::path, p));
        const FieldPath wa = FieldPath::from_convolution(sample_wa_path(cfg.horizon, fine_dt, dom, noise, rng));
        std::vector<std::vector<SpectralField>> coarse_u(static_cast<std::size_t>(levels));
        for (int level = 0; level < levels; ++level) {
            const std::size_t stride = finest_factor >> level;
            const Trajectory traj = integrate_on_path(u0, subsample(wa, stride), dom, cfg.solver.advection);
            const std::size_t to_coarse = std::size_t{1} << level;
            for (std::size_t i = 0; i < traj.size(); i += to_coarse) coarse_u[level].push_back(traj.u_fields[i]);
        }
        const auto& reference = coarse_u.back();
        for (int level = 0; level + 1 < levels; ++level) {
            double err = 0.0;
            for (std::size_t i = 0; i < reference.size(); ++i)
                err = std::max(err, h_norm(coarse_u[level][i] - reference[i], dom));
            errors[p].push_back(err);
        }
    });

    ConvergenceStudy study;
    std::vector<double> log_dt, log_err;
    for (int level = 0; level + 1 < levels; ++level) {
        ConvergenceRow row;
        row.dt = coarse_dt / static_cast<double>(std::size_t{1} << level);
        for (const auto& e : errors) row.error += e[static_cast<std::size_t>(level)] / paths;
        study.rows.push_back(row);
        log_dt.push_back(std::log(row.dt));
        log_err.push_back(std::log(row.error));
    }
    for (std::size_t i = 0; i < study.rows.size(); ++i)
        study.rows[i].order = i + 1 < study.rows.size()
                                  ? std::log2(study.rows[i].error / study.rows[i + 1].error)
                                  : std::numeric_limits<double>::quiet_NaN();
    study.fitted_order = fitted_slope(log_dt, log_err);
    return study;
}

ScalingStudy dependence_study(const RunConfig& cfg, std::uint64_t seed, int paths, const std::vector<double>& deltas) {
    if (deltas.size() < 2) throw std::invalid_argument("dependence_study: need at least two perturbation sizes");
    const DomainSpec& dom = cfg.domain;
    const long steps = std::max(1L, std::lround(cfg.horizon / cfg.solver.dt));
    const double h = cfg.horizon / static_cast<double>(steps);
    const SpectralField u0 = cfg.initial_condition();
    const SpectralField phi1 = SpectralField::single_mode(dom.modes, 1);
    const NoiseSpec noise = cfg.noise();
    const NoiseSpec louder = NoiseSpec::power_law(cfg.sigma * 1.1, cfg.decay, dom.modes);

    ScalingStudy study;
    study.deltas = deltas;
    study.sup_diffs.resize(static_cast<std::size_t>(paths));
    std::vector<std::vector<DependenceSeries>> series(static_cast<std::size_t>(paths));
    std::vector<std::vector<std::pair<Trajectory, Trajectory>>> pairs(static_cast<std::size_t>(paths));

    parallel_for(series.size(), [&](std::size_t p) {
        RngStream rng(seed, stream_id(StreamPurpose::path, p));
        const FieldPath wa = FieldPath::from_convolution(sample_wa_path(cfg.horizon, h, dom, noise, rng));
        RngStream same(seed, stream_id(StreamPurpose::path, p));
        const FieldPath wa_louder = FieldPath::from_convolution(sample_wa_path(cfg.horizon, h, dom, louder, same));

        const Trajectory base = integrate_on_path(u0, wa, dom, cfg.solver.advection);
        for (double delta : deltas) {
            Trajectory run = integrate_on_path(u0 + phi1 * delta, wa, dom, cfg.solver.advection);
            study.sup_diffs[p].push_back(sup_l4_difference(base, run, dom));
            series[p].push_back(dependence_series(base, run, dom));
            pairs[p].emplace_back(base, std::move(run));
        }
        Trajectory noisy = integrate_on_path(u0, wa_louder, dom, cfg.solver.advection);
        series[p].push_back(dependence_series(base, noisy, dom));
        pairs[p].emplace_back(base, std::move(noisy));
    });

    std::vector<DependenceSeries> pooled;
    for (auto& s : series) pooled.insert(pooled.end(), s.begin(), s.end());
    study.fit = fit_gronwall(pooled);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::vector<double> r;
        for (std::size_t i = 0; i + 1 < study.sup_diffs[p].size(); ++i)
            r.push_back(study.sup_diffs[p][i] / study.sup_diffs[p][i + 1]);
        study.ratios.push_back(std::move(r));
        for (const auto& [a, b] : pairs[p])
            study.dependence.push_back(check_continuous_dependence(a, b, dom, study.fit, cfg.slack));
    }
    return study;
}

FieldPath random_ball_path(const std::vector<double>& times, const DomainSpec& dom, double radius, RngStream& rng) {
    const SpectralField f1 = random_field(dom.modes, 2.0, rng);
    const SpectralField f2 = random_field(dom.modes, 2.0, rng);
    double b[6];
    for (double& v : b) v = rng.normal();
    const double horizon = times.back();
    FieldPath path;
    path.times = times;
    for (double t : times) {
        const double s = t / horizon;
        const double p1 = b[0] + b[1] * s + b[2] * std::sin(2.0 * std::numbers::pi * s);
        const double p2 = b[3] + b[4] * s + b[5] * std::cos(2.0 * std::numbers::pi * s);
        path.fields.push_back(f1 * p1 + f2 * p2);
    }
    const double e = enorm(path, dom);
    return e > 0.0 ? path.scaled(radius / e) : path;
}

LocalInterval local_interval(const RunConfig& cfg, const ConstantsLedger& ledger) {
    LocalInterval li;
    li.tau1 = tau_one(cfg.initial_condition(), ledger, cfg.domain, cfg.horizon, cfg.solver.dt);
    li.tau = std::min(li.tau1, cfg.horizon);
    const long steps = std::max<long>(cfg.solver.local_min_steps, std::lround(std::ceil(li.tau / cfg.solver.dt)));
    li.step = li.tau / static_cast<double>(steps);
    for (long i = 0; i <= steps; ++i) li.times.push_back(static_cast<double>(i) * li.step);
    li.times.back() = li.tau;
    return li;
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> verify_reports(const RunConfig& cfg, std::uint64_t seed, int paths) {
    validate(cfg);
    if (paths < 1) throw ConfigError("--paths", "must be >= 1");
    const DomainSpec& dom = cfg.domain;
    const double slack = cfg.slack;
    std::vector<CheckReport> out;

    const CalibrationResult cal = calibrate(cfg, seed);
    const ConstantsLedger& ledger = cal.ledger;
    {
        CheckReport r = make_report("ledger_relations", std::abs(6.0 * ledger.alpha * ledger.M - 1.0),
                                    4.0 * std::numeric_limits<double>::epsilon(), 0.0);
        r.pass = r.pass && ledger.relations_hold();
        out.push_back(r);
        out.push_back(make_report("interpolation_C2", cal.max_c2_ratio, 1.0 + 1e-12, 0.0));
        out.push_back(make_report("embedding_C1_single_mode", cal.single_mode_c1, ledger.C1, 0.0));
    }

    // Ensemble of simulated paths, each cross-checked against Picard on its
    // local interval.
    RunConfig sim = cfg;
    sim.solver.picard_cross_check = true;
    const auto n = static_cast<std::size_t>(paths);
    std::vector<CheckReport> embed(n), energy_h(n), energy_v(n), lipschitz(n);
    std::vector<CheckReport> picard_iters(n), picard_ratio(n), picard_ball(n), picard_residual(n), agreement(n);
    parallel_for(n, [&](std::size_t i) {
        const GlobalSolution sol = simulate_path(sim, ledger, seed, i);
        const Trajectory& traj = sol.trajectory;
        embed[i] = check_embedding(traj.u_path(), dom, ledger, slack);
        const EnergyReports e = check_energy(traj, dom, ledger, slack);
        energy_h[i] = e.sup_h;
        energy_v[i] = e.integral_v;
        lipschitz[i] = check_G_lipschitz(traj.u_path(), traj.y_path(), dom, slack);

        const CrossCheck& cc = *sol.cross_check;
        const PicardResult& pr = cc.picard;
        const double max_ratio = pr.ratios.empty() ? 0.0 : *std::max_element(pr.ratios.begin(), pr.ratios.end());
        picard_iters[i] = make_report("picard_iterations", pr.iterations, 10.0, 0.0);
        picard_ratio[i] = make_report("picard_successive_ratio", max_ratio, 0.55, 0.0);
        picard_ball[i] = make_report("picard_ball", pr.z_enorm, pr.alpha, 0.0);
        picard_residual[i] =
            make_report("picard_residual", pr.residual, 10.0 * cfg.solver.picard_tol * pr.z_enorm, 0.0);
        agreement[i] = make_report("picard_euler_agreement", cc.relative_difference, cc.tolerance, 0.0);
        for (auto* r : {&picard_iters[i], &picard_ratio[i], &picard_ball[i], &picard_residual[i], &agreement[i]}) {
            r->context["tau"] = cc.tau;
            r->context["tau1"] = cc.tau1;
            r->context["tau2"] = cc.tau2;
        }
    });
    out.push_back(aggregate("embedding", embed));
    out.push_back(aggregate("G_lipschitz", lipschitz));
    out.push_back(aggregate("energy_sup_H", energy_h));
    out.push_back(aggregate("energy_integral_V", energy_v));
    out.push_back(aggregate("picard_iterations", picard_iters));
    out.push_back(aggregate("picard_successive_ratio", picard_ratio));
    out.push_back(aggregate("picard_ball", picard_ball));
    out.push_back(aggregate("picard_residual", picard_residual));
    out.push_back(aggregate("picard_euler_agreement", agreement));

    // Linear regularity on random (y0, g) pairs.
    std::vector<CheckReport> regularity(n), semigroup(n);
    const int steps = 128;
    const double h = cfg.horizon / steps;
    parallel_for(n, [&](std::size_t i) {
        RngStream rng(seed, stream_id(StreamPurpose::check, i));
        const SpectralField y0 = random_field(dom.modes, 2.0, rng) * std::exp(6.0 * rng.uniform() - 3.0);
        const SpectralField ga = random_field(dom.modes, 2.0, rng), gb = random_field(dom.modes, 2.0, rng);
        std::vector<SpectralField> g;
        for (int j = 0; j <= steps; ++j) g.push_back(ga + gb * (static_cast<double>(j) / steps));
        const RegularityReports r = check_semigroup_regularity(y0, FieldPath::uniform(h, g), dom, ledger, slack);
        regularity[i] = r.regularity;
        semigroup[i] = r.semigroup;
    });
    out.push_back(aggregate("semigroup_regularity", regularity));
    out.push_back(aggregate("semigroup_E_bound", semigroup));

    // Contraction of calF on admissible pairs in the alpha-ball.
    const LocalInterval li = local_interval(cfg, ledger);
    const SpectralField u0 = cfg.initial_condition();
    std::vector<CheckReport> contraction(n), f_lipschitz(n);
    parallel_for(n, [&](std::size_t i) {
        RngStream rng(seed, stream_id(StreamPurpose::check, n + i));
        const FieldPath z1 = random_ball_path(li.times, dom, ledger.alpha * rng.uniform(), rng);
        const FieldPath z2 = rng.uniform() < 0.5 ? z1.scaled(0.5)
                                                 : random_ball_path(li.times, dom, ledger.alpha * rng.uniform(), rng);
        const ContractionReports r = check_F_contraction(z1, z2, u0, dom, ledger, cfg.solver, slack);
        contraction[i] = r.ratio;
        f_lipschitz[i] = r.lipschitz;
    });
    out.push_back(aggregate("F_contraction", contraction));
    out.push_back(aggregate("F_lipschitz", f_lipschitz));

    // Continuous dependence on initial data and noise.
    const ScalingStudy dep = dependence_study(cfg, seed, cfg.dependence_paths);
    double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
    for (const auto& r : dep.ratios)
        for (double v : r) {
            min_ratio = std::min(min_ratio, v);
            max_ratio = std::max(max_ratio, v);
        }
    CheckReport low = make_report("dependence_scaling_lower", 5.0, min_ratio, 0.0);
    CheckReport high = make_report("dependence_scaling_upper", max_ratio, 20.0, 0.0);
    for (auto* r : {&low, &high}) {
        r->context["min_ratio"] = min_ratio;
        r->context["max_ratio"] = max_ratio;
    }
    out.push_back(low);
    out.push_back(high);
    CheckReport dep_report = aggregate("continuous_dependence", dep.dependence);
    dep_report.context["C2_fit"] = dep.fit.C2;
    dep_report.context["C3_fit"] = dep.fit.C3;
    dep_report.context["residual_rms"] = dep.fit.residual_rms;
    out.push_back(dep_report);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void prepare_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw ConfigError("--out-dir", "cannot create output directory '" + dir.string() + "'");
    const auto probe = dir / ".sks_write_probe";
    try {
        io::write_file(probe, "");
    } catch (const std::runtime_error&) {
        throw ConfigError("--out-dir", "output directory '" + dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

class Manifest {
public:
    Manifest(const RunConfig& cfg, const RunOptions& opts, std::string command)
        : start_(std::chrono::steady_clock::now()) {
        nlohmann::json config = nlohmann::json::object();
        for (const auto& key : config_keys()) config[key] = get_config_value(cfg, key);
        json_ = {{"tool_version", tool_version}, {"command", std::move(command)},  {"master_seed", opts.seed},
                 {"path_count", opts.paths},     {"levels", opts.levels},          {"samples", opts.samples},
                 {"config", config},             {"outputs", nlohmann::json::array()}};
    }

    void add_output(const std::filesystem::path& p) { json_["outputs"].push_back(p.filename().string()); }

    void write(const std::filesystem::path& dir) {
        json_["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        io::write_file(dir / "manifest.json", json_.dump(2) + "\n");
    }

private:
    std::chrono::steady_clock::time_point start_;
    nlohmann::json json_;
};

}  // namespace

SimulateOutputs run_simulate(const RunConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    if (opts.paths < 1) throw ConfigError("--paths", "must be >= 1");
    prepare_out_dir(opts.out_dir);
    Manifest manifest(cfg, opts, "simulate");

    const CalibrationResult cal = calibrate(cfg, opts.seed, opts.samples);
    const auto n = static_cast<std::size_t>(opts.paths);
    std::vector<std::string> norm_csv(n), snapshot_csv(n);
    parallel_for(n, [&](std::size_t i) {
        const GlobalSolution sol = simulate_path(cfg, cal.ledger, opts.seed, i);
        std::ostringstream csv;
        io::write_norm_csv(csv, sol.trajectory, cfg.domain, energy_bound_series(sol.trajectory, cfg.domain, cal.ledger));
        norm_csv[i] = csv.str();
        if (cfg.snapshots) {
            std::ostringstream snap;
            io::write_snapshot_csv(snap, sol.trajectory);
            snapshot_csv[i] = snap.str();
        }
    });

    SimulateOutputs out;
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto path = opts.out_dir / name;
        io::write_file(path, text);
        out.files.push_back(path);
        manifest.add_output(path);
    };
    char name[64];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(name, sizeof name, "path_%04zu.csv", i);
        emit(name, norm_csv[i]);
        if (cfg.snapshots) {
            std::snprintf(name, sizeof name, "fields_%04zu.csv", i);
            emit(name, snapshot_csv[i]);
        }
    }
    emit("constants.json", io::to_json(cal.ledger).dump(2) + "\n");
    manifest.write(opts.out_dir);
    return out;
}

std::vector<CheckReport> run_verify(const RunConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    prepare_out_dir(opts.out_dir);
    Manifest manifest(cfg, opts, "verify");
    const int paths = opts.paths > 1 ? opts.paths : cfg.sweep_size;
    std::vector<CheckReport> reports = verify_reports(cfg, opts.seed, paths);

    const auto report_dir = opts.out_dir / "reports";
    std::filesystem::create_directories(report_dir);
    nlohmann::json all = nlohmann::json::array();
    std::string summary = "name,lhs,rhs,margin,pass\n";
    for (const auto& r : reports) {
        const auto path = report_dir / (r.name + ".json");
        io::write_file(path, io::to_json(r).dump(2) + "\n");
        manifest.add_output(path);
        all.push_back(io::to_json(r));
        summary += r.name + "," + io::format_number(r.lhs) + "," + io::format_number(r.rhs) + "," +
                   io::format_number(r.margin) + "," + (r.pass ? "true" : "false") + "\n";
    }
    io::write_file(opts.out_dir / "report.json", all.dump(2) + "\n");
    io::write_file(opts.out_dir / "summary.csv", summary);
    manifest.add_output(opts.out_dir / "report.json");
    manifest.add_output(opts.out_dir / "summary.csv");
    manifest.write(opts.out_dir);
    return reports;
}

ConvergenceStudy run_converge(const RunConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    if (opts.levels < 3) throw ConfigError("--levels", "convergence study needs at least 3 levels");
    prepare_out_dir(opts.out_dir);
    Manifest manifest(cfg, opts, "converge");
    const ConvergenceStudy study = convergence_study(cfg, opts.seed, opts.levels, opts.paths);
    std::string csv = "dt,error,order\n";
    for (const auto& row : study.rows)
        csv += io::format_number(row.dt) + "," + io::format_number(row.error) + "," + io::format_number(row.order) +
               "\n";
    io::write_file(opts.out_dir / "convergence.csv", csv);
    nlohmann::json summary = {{"fitted_order", study.fitted_order}, {"levels", opts.levels}, {"paths", opts.paths}};
    io::write_file(opts.out_dir / "convergence.json", summary.dump(2) + "\n");
    manifest.add_output(opts.out_dir / "convergence.csv");
    manifest.add_output(opts.out_dir / "convergence.json");
    manifest.write(opts.out_dir);
    return study;
}

CalibrationResult run_constants(const RunConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    prepare_out_dir(opts.out_dir);
    Manifest manifest(cfg, opts, "constants");
    const CalibrationResult cal = calibrate(cfg, opts.seed, opts.samples);
    nlohmann::json j = io::to_json(cal.ledger);
    j["samples"] = cal.samples;
    j["seed"] = opts.seed;
    j["max_interpolation_ratio"] = cal.max_c2_ratio;
    j["single_mode_embedding_ratio"] = cal.single_mode_c1;
    j["domain"] = {{"half_length", cfg.domain.half_length}, {"shift", cfg.domain.shift}, {"modes", cfg.domain.modes}};
    io::write_file(opts.out_dir / "constants.json", j.dump(2) + "\n");
    manifest.add_output(opts.out_dir / "constants.json");
    manifest.write(opts.out_dir);
    return cal;
}

}  // namespace sks

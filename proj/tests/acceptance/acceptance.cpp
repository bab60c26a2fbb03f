// Acceptance gate: one PASS/FAIL line per criterion, each under its time
// budget. Exit status is the number of failed criteria (capped at 1).

#include "../oracles.hpp"

#include "sks/io.hpp"
#include "sks/parallel.hpp"
#include "sks/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

using namespace sks;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SpectralField random_coeffs(int modes, RngStream& rng, double decay) {
    SpectralField f(modes);
    for (int k = 1; k <= modes; ++k) f.mode(k) = rng.normal() * std::pow(k, -decay);
    return f;
}

const RunConfig kDefault{};

const ConstantsLedger& calibrated_ledger() {
    static const ConstantsLedger ledger = calibrate(kDefault, 0).ledger;
    return ledger;
}

// --- criteria ------------------------------------------------------------------

Outcome transform_parseval() {
    const int n = 256;
    const DomainSpec dom{16.0, 0.5, n};
    RngStream rng(1, stream_id(StreamPurpose::check, 0));
    double round_trip = 0.0, parseval = 0.0, l4 = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const SpectralField f = random_coeffs(n, rng, trial % 2 ? 1.0 : 0.0);
        double scale = 0.0;
        for (double a : f.coeffs()) scale = std::max(scale, std::abs(a));
        for (int points : {n, dealiased_points(n), quartic_points(n)}) {
            const auto grid = to_grid(f, points);
            const SpectralField back = from_grid(grid, n);
            for (int k = 1; k <= n; ++k) round_trip = std::max(round_trip, std::abs(back.mode(k) - f.mode(k)) / scale);
            double sum = 0.0;
            for (double v : grid) sum += v * v;
            const double discrete = 2.0 * dom.half_length / (points + 1) * sum;
            const double h2 = h_norm(f, dom) * h_norm(f, dom);
            parseval = std::max(parseval, std::abs(discrete - h2) / h2);
        }
        // Quartic norm is grid independent once the grid resolves the product.
        const double a = l4_norm_pow4(f, dom);
        const auto fine = to_grid(f, 4 * n);
        double sum = 0.0;
        for (double v : fine) sum += v * v * v * v;
        l4 = std::max(l4, std::abs(2.0 * dom.half_length / (4 * n + 1) * sum - a) / a);
    }
    const double worst = std::max({round_trip, parseval, l4});
    return {worst <= 1e-10, fmt("round-trip %.2e, Parseval %.2e, L4 consistency %.2e (limit 1e-10)", round_trip,
                                parseval, l4)};
}

Outcome cubic_cancellation() {
    const DomainSpec dom{16.0, 0.5, 64};
    RngStream rng(2, stream_id(StreamPurpose::check, 0));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const SpectralField u = random_coeffs(64, rng, 0.5 + 1.5 * rng.uniform()) * std::exp(4.0 * rng.uniform() - 2.0);
        const double v = v_norm(u, dom);
        worst = std::max(worst, std::abs(inner_product(advection_product(u, dom), u, dom)) / (1.0 + v * v * v));
    }
    return {worst <= 1e-10, fmt("max |<u u_x, u>| / (1 + ||u||_V^3) = %.2e over 1000 fields", worst)};
}

Outcome noise_exactness() {
    const DomainSpec& dom = kDefault.domain;
    const NoiseSpec noise = kDefault.noise();
    const int samples = 10000;
    const int watched[] = {1, 2, 4, 8, 16};
    std::vector<std::vector<double>> step(5), stationary(5);
    RngStream rng(3, stream_id(StreamPurpose::check, 0));
    ConvolutionState zero;
    zero.wa = SpectralField(dom.modes);
    const double h = kDefault.solver.dt;
    const double long_time = 40.0;  // 2 |lambda_1| T > 39
    for (int s = 0; s < samples; ++s) {
        const ConvolutionState one = advance_convolution(zero, h, dom, noise, rng);
        ConvolutionState st = zero;
        for (int i = 0; i < 80; ++i) st = advance_convolution(st, long_time / 80, dom, noise, rng);
        for (int j = 0; j < 5; ++j) {
            step[j].push_back(one.wa.mode(watched[j]));
            stationary[j].push_back(st.wa.mode(watched[j]));
        }
    }
    auto zscore = [&](const std::vector<double>& x, double expected) {
        double mean = 0.0, var = 0.0;
        for (double v : x) mean += v / samples;
        for (double v : x) var += (v - mean) * (v - mean) / (samples - 1);
        return std::abs(var - expected) / (expected * std::sqrt(2.0 / (samples - 1)));
    };
    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
        const int k = watched[j];
        const double q = noise.q[k - 1], lam = eigenvalue(k, dom);
        worst = std::max(worst, zscore(step[j], q * -std::expm1(2.0 * lam * h) / (-2.0 * lam)));
        worst = std::max(worst, zscore(stationary[j], q / (-2.0 * lam)));
    }
    return {worst <= 4.0, fmt("largest variance deviation %.2f standard errors (limit 4)", worst)};
}

Outcome deterministic_oracle() {
    RunConfig cfg = kDefault;
    cfg.sigma = 0.0;
    const DomainSpec& dom = cfg.domain;
    const SpectralField u0 = cfg.initial_condition();
    const long steps = 10000;  // dt = 1e-4
    const FieldPath zero = FieldPath::uniform(
        1.0 / steps, std::vector<SpectralField>(static_cast<std::size_t>(steps + 1), SpectralField(dom.modes)));
    const Trajectory traj = integrate_on_path(u0, zero, dom);
    const auto ref = oracle::galerkin_rk4(u0.vector(), dom.half_length, dom.shift, 1.0, 2 * steps, 2);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        err = std::max(err, oracle::h_norm(oracle::minus(traj.u_fields[i].vector(), ref[i]), dom.half_length));
        scale = std::max(scale, oracle::h_norm(ref[i], dom.half_length));
    }
    return {err / scale <= 1e-4, fmt("relative L_inf(0,1;H) error %.2e at dt = 1e-4 (limit 1e-4)", err / scale)};
}

Outcome picard_behavior() {
    RunConfig cfg = kDefault;
    cfg.solver.picard_cross_check = true;
    const ConstantsLedger& ledger = calibrated_ledger();
    const int paths = 10;
    std::vector<CrossCheck> checks(paths);
    parallel_for(paths, [&](std::size_t i) { checks[i] = *simulate_path(cfg, ledger, 0, i).cross_check; });
    int worst_iters = 0;
    double worst_ratio = 0.0, worst_residual = 0.0, worst_ball = 0.0, tau = 0.0;
    bool ok = true;
    for (const auto& c : checks) {
        const PicardResult& p = c.picard;
        worst_iters = std::max(worst_iters, p.iterations);
        for (double r : p.ratios) worst_ratio = std::max(worst_ratio, r);
        worst_residual = std::max(worst_residual, p.residual);
        worst_ball = std::max(worst_ball, p.z_enorm / p.alpha);
        tau = c.tau;
        ok = ok && p.in_ball && p.iterations <= 10 && p.residual <= 10.0 * cfg.solver.picard_tol &&
             c.tau <= std::min(c.tau1, c.tau2) * (1.0 + 1e-12);
    }
    ok = ok && worst_ratio <= 0.55;
    return {ok, fmt("%d paths on tau = %.3g: iterations <= %d, ratio <= %.2e, ||z||_E/alpha <= %.2e, residual <= %.2e",
                    paths, tau, worst_iters, worst_ratio, worst_ball, worst_residual)};
}

Outcome contraction_sweep() {
    const ConstantsLedger& ledger = calibrated_ledger();
    const LocalInterval li = local_interval(kDefault, ledger);
    const SpectralField u0 = kDefault.initial_condition();
    std::vector<double> ratios(100);
    parallel_for(ratios.size(), [&](std::size_t i) {
        RngStream rng(5, stream_id(StreamPurpose::check, i));
        const FieldPath z1 = random_ball_path(li.times, kDefault.domain, ledger.alpha * rng.uniform(), rng);
        const FieldPath z2 = i % 2 ? z1.scaled(0.5)
                                   : random_ball_path(li.times, kDefault.domain, ledger.alpha * rng.uniform(), rng);
        ratios[i] = check_F_contraction(z1, z2, u0, kDefault.domain, ledger, kDefault.solver).ratio.lhs;
    });
    const double worst = *std::max_element(ratios.begin(), ratios.end());
    return {worst <= 0.55, fmt("max ratio %.3e over 100 pairs on [0, %.3g] (limit 0.55)", worst, li.tau)};
}

std::vector<Trajectory> noisy_ensemble(int paths) {
    std::vector<Trajectory> out(static_cast<std::size_t>(paths));
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = simulate_path(kDefault, calibrated_ledger(), 0, i).trajectory;
    });
    return out;
}

Outcome lipschitz_embedding() {
    const auto runs = noisy_ensemble(100);
    const ConstantsLedger& ledger = calibrated_ledger();
    int lip = 0, emb = 0;
    double worst_lip = 0.0, worst_emb = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const FieldPath u = runs[i].u_path();
        const CheckReport e = check_embedding(u, kDefault.domain, ledger);
        const CheckReport g = check_G_lipschitz(u, runs[(i + 1) % runs.size()].u_path(), kDefault.domain);
        emb += e.pass;
        lip += g.pass;
        worst_emb = std::max(worst_emb, e.lhs / e.rhs);
        worst_lip = std::max(worst_lip, g.lhs / g.rhs);
    }
    return {lip == 100 && emb == 100, fmt("Lipschitz %d/100 (worst lhs/rhs %.3f), embedding %d/100 (worst %.3f)", lip,
                                          worst_lip, emb, worst_emb)};
}

Outcome energy_bounds() {
    const auto runs = noisy_ensemble(100);
    int sup = 0, integral = 0;
    double worst = 0.0;
    for (const auto& r : runs) {
        const EnergyReports e = check_energy(r, kDefault.domain, calibrated_ledger());
        sup += e.sup_h.pass;
        integral += e.integral_v.pass;
        worst = std::max({worst, e.sup_h.lhs / e.sup_h.rhs, e.integral_v.lhs / e.integral_v.rhs});
    }
    return {sup == 100 && integral == 100,
            fmt("sup bound %d/100, integral bound %d/100, worst lhs/rhs %.3f", sup, integral, worst)};
}

Outcome continuous_dependence() {
    const ScalingStudy s = dependence_study(kDefault, 0, kDefault.dependence_paths);
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : s.ratios)
        for (double v : r) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    std::size_t held = 0;
    for (const auto& r : s.dependence) held += r.pass;
    const bool ok = lo >= 5.0 && hi <= 20.0 && held == s.dependence.size();
    return {ok, fmt("ratios in [%.4f, %.4f] (need [5, 20]); fitted bound (C2 = %.3g, C3 = %.3g) holds on %zu/%zu pairs",
                    lo, hi, s.fit.C2, s.fit.C3, held, s.dependence.size())};
}

Outcome strong_convergence() {
    const ConvergenceStudy s = convergence_study(kDefault, 0, 4, 20);
    std::string rows;
    for (const auto& r : s.rows) rows += fmt(" %.2e", r.error);
    return {s.fitted_order >= 0.8, fmt("fitted order %.3f over 4 levels, 20 paths; errors%s", s.fitted_order, rows.c_str())};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto base = std::filesystem::temp_directory_path() / "sks_acceptance_determinism";
    std::filesystem::remove_all(base);
    RunConfig cfg = kDefault;
    cfg.snapshots = true;
    RunConfig vcfg = kDefault;
    vcfg.horizon = 0.2;
    vcfg.dependence_paths = 2;
    std::vector<std::string> compared;
    std::size_t identical = 0;
    std::vector<std::filesystem::path> dirs;
    for (int run = 0; run < 2; ++run) {
        RunOptions opts;
        opts.seed = 2024;
        opts.paths = 3;
        opts.out_dir = base / ("run" + std::to_string(run));
        run_simulate(cfg, opts);
        opts.out_dir = base / ("verify" + std::to_string(run));
        run_verify(vcfg, opts);
    }
    for (const char* sub : {"run", "verify"}) {
        for (const auto& entry : std::filesystem::recursive_directory_iterator(base / (std::string(sub) + "0"))) {
            if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
            const auto rel = std::filesystem::relative(entry.path(), base / (std::string(sub) + "0"));
            compared.push_back(rel.string());
            identical += slurp(entry.path()) == slurp(base / (std::string(sub) + "1") / rel);
        }
    }
    return {!compared.empty() && identical == compared.size(),
            fmt("%zu/%zu CSV/JSON files byte-identical across two runs", identical, compared.size())};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"transform_parseval", 5, transform_parseval},
        {"cubic_cancellation", 10, cubic_cancellation},
        {"noise_exactness", 60, noise_exactness},
        {"deterministic_oracle", 60, deterministic_oracle},
        {"picard_behavior", 60, picard_behavior},
        {"contraction_sweep", 300, contraction_sweep},
        {"lipschitz_embedding_sweeps", 300, lipschitz_embedding},
        {"energy_bounds", 600, energy_bounds},
        {"continuous_dependence", 300, continuous_dependence},
        {"strong_self_convergence", 600, strong_convergence},
        {"determinism", 600, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && secs < c.budget_s;
        failed += !pass;
        std::printf("%s  %-28s %s [%.1f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                    c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

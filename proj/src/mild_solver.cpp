#include "sks/mild_solver.hpp"

#include "sks/path_norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sks {

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solver.dt must be > 0");
    if (!(picard_tol > 0.0)) throw std::invalid_argument("solver.picard_tol must be > 0");
    if (picard_max_iters < 1) throw std::invalid_argument("solver.picard_max_iters must be >= 1");
    if (save_stride < 1) throw std::invalid_argument("solver.save_stride must be >= 1");
    if (quad_substeps < 1) throw std::invalid_argument("solver.quad_substeps must be >= 1");
    if (local_min_steps < 1) throw std::invalid_argument("solver.local_min_steps must be >= 1");
}

// ---------------------------------------------------------------------------

FieldPath FieldPath::uniform(double step, std::vector<SpectralField> fields) {
    FieldPath p;
    p.times.resize(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) p.times[i] = static_cast<double>(i) * step;
    p.fields = std::move(fields);
    return p;
}

FieldPath FieldPath::from_convolution(const std::vector<ConvolutionState>& states) {
    FieldPath p;
    p.times.reserve(states.size());
    p.fields.reserve(states.size());
    for (const auto& s : states) {
        p.times.push_back(s.time);
        p.fields.push_back(s.wa);
    }
    return p;
}

double FieldPath::uniform_step() const {
    if (times.size() != fields.size()) throw std::invalid_argument("FieldPath: times/fields mismatch");
    if (times.size() < 2) throw std::invalid_argument("FieldPath: need at least two nodes");
    if (times.front() != 0.0) throw std::invalid_argument("FieldPath: grid must start at 0");
    const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(h > 0.0)) throw std::invalid_argument("FieldPath: grid must increase");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - h) > 1e-9 * h)
            throw std::invalid_argument("FieldPath: non-uniform time grid");
    return h;
}

namespace {

void require_same_grid(const FieldPath& a, const FieldPath& b) {
    if (a.size() != b.size() || a.times.size() != b.times.size())
        throw std::invalid_argument("FieldPath: grid length mismatch");
    for (std::size_t i = 0; i < a.times.size(); ++i)
        if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i])))
            throw std::invalid_argument("FieldPath: grid mismatch");
}

}  // namespace

FieldPath& FieldPath::operator+=(const FieldPath& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < fields.size(); ++i) fields[i] += o.fields[i];
    return *this;
}

FieldPath& FieldPath::operator-=(const FieldPath& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < fields.size(); ++i) fields[i] -= o.fields[i];
    return *this;
}

FieldPath FieldPath::scaled(double s) const {
    FieldPath out = *this;
    for (auto& f : out.fields) f *= s;
    return out;
}

// ---------------------------------------------------------------------------

double phi1(double z) {
    if (std::abs(z) < 1e-8) return 1.0 + z / 2.0;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 0.1) {
        // sum_{n>=0} z^n / (n + 2)!
        double term = 0.5, sum = 0.5;
        for (int n = 1; n <= 10; ++n) {
            term *= z / (n + 2);
            sum += term;
        }
        return sum;
    }
    return (std::expm1(z) - z) / (z * z);
}

double phi3(double z) {
    if (std::abs(z) < 1.0) {
        // sum_{n>=0} z^n / (n + 3)!
        double term = 1.0 / 6.0, sum = term;
        for (int n = 1; n <= 20; ++n) {
            term *= z / (n + 3);
            sum += term;
        }
        return sum;
    }
    return (std::expm1(z) - z - 0.5 * z * z) / (z * z * z);
}

namespace {

/// Per-mode weights of the exact exponential integral of a linear
/// interpolant over one step: y+ = decay y + prev_w g_prev + next_w g_next.
struct LinearKernel {
    std::vector<double> decay, prev_w, next_w;

    LinearKernel(double h, const DomainSpec& dom) {
        const auto n = static_cast<std::size_t>(dom.modes);
        decay.resize(n);
        prev_w.resize(n);
        next_w.resize(n);
        for (int k = 1; k <= dom.modes; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            const double z = eigenvalue(k, dom) * h;
            const double p1 = phi1(z), p2 = phi2(z);
            decay[i] = std::exp(z);
            prev_w[i] = h * (p1 - p2);
            next_w[i] = h * p2;
        }
    }

    void advance(SpectralField& y, const SpectralField& g_prev, const SpectralField& g_next) const {
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = decay[i] * y[i] + prev_w[i] * g_prev[i] + next_w[i] * g_next[i];
    }
};

/// Same for a quadratic interpolant through the ends and midpoint of the step,
/// using int_0^1 e^{z(1-s)} s^j ds = j! phi_{j+1}(z).
struct QuadraticKernel {
    std::vector<double> decay, w0, wm, w1;

    QuadraticKernel(double h, const DomainSpec& dom) {
        const auto n = static_cast<std::size_t>(dom.modes);
        decay.resize(n);
        w0.resize(n);
        wm.resize(n);
        w1.resize(n);
        for (int k = 1; k <= dom.modes; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            const double z = eigenvalue(k, dom) * h;
            const double p1 = phi1(z), p2 = phi2(z), p3 = phi3(z);
            decay[i] = std::exp(z);
            w0[i] = h * (p1 - 3.0 * p2 + 4.0 * p3);
            wm[i] = h * (4.0 * p2 - 8.0 * p3);
            w1[i] = h * (4.0 * p3 - p2);
        }
    }

    void advance(SpectralField& y, const SpectralField& g0, const SpectralField& gm, const SpectralField& g1) const {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = decay[i] * y[i] + w0[i] * g0[i] + wm[i] * gm[i] + w1[i] * g1[i];
    }
};

}  // namespace

std::vector<SpectralField> duhamel_integrate(const SpectralField& y0, const std::vector<SpectralField>& g_nodes,
                                             double h, const DomainSpec& dom) {
    if (!(h > 0.0)) throw std::invalid_argument("duhamel_integrate: h must be > 0");
    if (g_nodes.empty()) throw std::invalid_argument("duhamel_integrate: empty forcing");
    for (const auto& g : g_nodes)
        if (g.modes() != y0.modes()) throw std::invalid_argument("duhamel_integrate: mode count mismatch");
    const LinearKernel kernel(h, dom);
    std::vector<SpectralField> out;
    out.reserve(g_nodes.size());
    out.push_back(y0);
    for (std::size_t i = 1; i < g_nodes.size(); ++i) {
        SpectralField next = out.back();
        kernel.advance(next, g_nodes[i - 1], g_nodes[i]);
        out.push_back(std::move(next));
    }
    return out;
}

FieldPath apply_F(const FieldPath& path, const DomainSpec& dom, const SolverConfig& cfg) {
    const double h = path.uniform_step();
    const int m = cfg.quad_substeps;
    if (m < 1) throw std::invalid_argument("apply_F: quad_substeps must be >= 1");
    for (const auto& f : path.fields)
        if (f.modes() != dom.modes) throw std::invalid_argument("apply_F: mode count mismatch");
    const QuadraticKernel kernel(h / m, dom);

    FieldPath out;
    out.times = path.times;
    out.fields.reserve(path.size());
    SpectralField acc(dom.modes);
    out.fields.push_back(acc);

    SpectralField g_prev = nonlinear_G(path.fields.front(), dom, cfg.advection);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const SpectralField& a = path.fields[i];
        const SpectralField& b = path.fields[i + 1];
        auto G_at = [&](double theta) { return nonlinear_G(a * (1.0 - theta) + b * theta, dom, cfg.advection); };
        for (int j = 1; j <= m; ++j) {
            const SpectralField g_mid = G_at((j - 0.5) / m);
            SpectralField g_next = j == m ? nonlinear_G(b, dom, cfg.advection) : G_at(static_cast<double>(j) / m);
            kernel.advance(acc, g_prev, g_mid, g_next);
            g_prev = std::move(g_next);
        }
        out.fields.push_back(acc);
    }
    return out;
}

FieldPath semigroup_path(const SpectralField& u0, const std::vector<double>& times, const DomainSpec& dom) {
    FieldPath p;
    p.times = times;
    p.fields.reserve(times.size());
    for (double t : times) p.fields.push_back(apply_semigroup(u0, t, dom));
    return p;
}

// ---------------------------------------------------------------------------

double tau_one(const SpectralField& u0, const ConstantsLedger& consts, const DomainSpec& dom, double T, double dt) {
    if (!(consts.M > 0.0) || !(consts.K > 0.0))
        throw std::invalid_argument("tau_one: ledger constants M and K must be positive");
    if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("tau_one: T and dt must be positive");
    double sup_h = 0.0, sup_v = 0.0;
    const auto steps = static_cast<long>(std::floor(T / dt + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const SpectralField s = apply_semigroup(u0, static_cast<double>(i) * dt, dom);
        sup_h = std::max(sup_h, h_norm(s, dom));
        sup_v = std::max(sup_v, v_norm(s, dom));
    }
    const double bracket = dom.shift * std::pow(2.0 * dom.half_length, 0.25) +
                           16.0 * consts.K * std::pow(std::pow(sup_h, 4) + std::pow(sup_v, 4), 0.25);
    return std::pow(6.0 * consts.M * bracket, -4.0);
}

TauTwo tau_two(const FieldPath& wa_path, double alpha, const DomainSpec& dom) {
    if (wa_path.size() < 2) throw std::invalid_argument("tau_two: need at least two nodes");
    if (!wa_path.fields.front().is_zero()) throw std::invalid_argument("tau_two: path must start at w_A(0) = 0");
    const auto integral = cumulative_trapezoid(l4_pow4_series(wa_path, dom), wa_path.times);
    const double bound = alpha / 2.0;
    if (integral[1] > bound) return {wa_path.times[1], true};
    std::size_t last = 1;
    while (last + 1 < integral.size() && integral[last + 1] <= bound) ++last;
    return {wa_path.times[last], false};
}

PicardResult picard_solve(const SpectralField& u0, const FieldPath& wa_path, const DomainSpec& dom,
                          const SolverConfig& cfg, const ConstantsLedger& consts) {
    cfg.validate();
    wa_path.uniform_step();
    const FieldPath su0 = semigroup_path(u0, wa_path.times, dom);

    PicardResult result;
    result.alpha = consts.alpha;
    FieldPath z = wa_path.scaled(0.0);
    double prev_update = 0.0;
    for (int it = 1; it <= cfg.picard_max_iters; ++it) {
        FieldPath next = wa_path + apply_F(z + su0, dom, cfg);
        const double update = enorm(next - z, dom);
        const double size = enorm(next, dom);
        if (!std::isfinite(update) || !std::isfinite(size))
            throw PicardDivergence("picard_solve: non-finite iterate", result.last_ratio, it);
        if (it > 1 && prev_update > 0.0) {
            result.last_ratio = update / prev_update;
            result.ratios.push_back(result.last_ratio);
        }
        z = std::move(next);
        prev_update = update;
        result.iterations = it;
        if (update <= cfg.picard_tol * size) {
            result.z_enorm = size;
            result.residual = enorm(z - wa_path - apply_F(z + su0, dom, cfg), dom);
            result.in_ball = size <= consts.alpha;
            result.u = su0 + z;
            result.z = std::move(z);
            return result;
        }
    }
    throw PicardDivergence("picard_solve: no convergence after " + std::to_string(cfg.picard_max_iters) +
                               " iterations (last ratio " + std::to_string(result.last_ratio) + ")",
                           result.last_ratio, result.iterations);
}

// ---------------------------------------------------------------------------

SpectralField step_exponential_euler(const SpectralField& y, const SpectralField& wa, double h,
                                     const DomainSpec& dom, bool advection) {
    if (!(h > 0.0)) throw std::invalid_argument("step_exponential_euler: h must be > 0");
    if (y.modes() != dom.modes || wa.modes() != dom.modes)
        throw std::invalid_argument("step_exponential_euler: mode count mismatch");
    const SpectralField g = nonlinear_G(y + wa, dom, advection);
    SpectralField out(dom.modes);
    for (int k = 1; k <= dom.modes; ++k) {
        const double z = eigenvalue(k, dom) * h;
        out.mode(k) = std::exp(z) * y.mode(k) + h * phi1(z) * g.mode(k);
    }
    return out;
}

namespace {

constexpr double blow_up_threshold = 1e100;

/// Precomputed exponential-Euler weights for a fixed step.
struct EulerKernel {
    std::vector<double> decay, weight;

    EulerKernel(double h, const DomainSpec& dom) {
        for (int k = 1; k <= dom.modes; ++k) {
            const double z = eigenvalue(k, dom) * h;
            decay.push_back(std::exp(z));
            weight.push_back(h * phi1(z));
        }
    }

    SpectralField step(const SpectralField& y, const SpectralField& wa, const DomainSpec& dom, bool advection) const {
        const SpectralField g = nonlinear_G(y + wa, dom, advection);
        SpectralField out(dom.modes);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = decay[i] * y[i] + weight[i] * g[i];
        return out;
    }
};

void check_finite(const SpectralField& y, double t) {
    bool bad = !y.all_finite();
    if (!bad) {
        double sq = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) sq += y[i] * y[i];
        bad = !(std::sqrt(sq) < blow_up_threshold);
    }
    if (bad) throw BlowUpError("blow-up: solution norm overflowed at t = " + std::to_string(t));
}

}  // namespace

Trajectory integrate_on_path(const SpectralField& u0, const FieldPath& wa_path, const DomainSpec& dom,
                             bool advection) {
    const double h = wa_path.uniform_step();
    if (u0.modes() != dom.modes) throw std::invalid_argument("integrate_on_path: mode count mismatch");
    const EulerKernel kernel(h, dom);
    Trajectory traj;
    traj.times = wa_path.times;
    traj.wa_fields = wa_path.fields;
    traj.y_fields.reserve(wa_path.size());
    traj.y_fields.push_back(u0);
    for (std::size_t i = 0; i + 1 < wa_path.size(); ++i) {
        traj.y_fields.push_back(kernel.step(traj.y_fields.back(), wa_path.fields[i], dom, advection));
        check_finite(traj.y_fields.back(), wa_path.times[i + 1]);
    }
    traj.u_fields.reserve(wa_path.size());
    for (std::size_t i = 0; i < wa_path.size(); ++i) traj.u_fields.push_back(traj.y_fields[i] + traj.wa_fields[i]);
    return traj;
}

namespace {

FieldPath prefix(const FieldPath& p, std::size_t nodes) {
    FieldPath out;
    out.times.assign(p.times.begin(), p.times.begin() + static_cast<std::ptrdiff_t>(nodes));
    out.fields.assign(p.fields.begin(), p.fields.begin() + static_cast<std::ptrdiff_t>(nodes));
    return out;
}

}  // namespace

CrossCheck local_cross_check(const SpectralField& u0, const FieldPath& wa_path, const DomainSpec& dom,
                             const NoiseSpec& noise, const SolverConfig& cfg, const ConstantsLedger& consts,
                             RngStream& local_rng) {
    CrossCheck cc;
    const double dt = wa_path.uniform_step();
    const double T = wa_path.horizon();
    cc.tau1 = tau_one(u0, consts, dom, T, dt);
    const TauTwo coarse = tau_two(wa_path, consts.alpha, dom);
    cc.tau2 = coarse.below_resolution ? 0.0 : coarse.value;
    double tau = std::min(cc.tau1, T);
    if (!coarse.below_resolution) tau = std::min(tau, coarse.value);

    FieldPath local;
    if (!coarse.below_resolution && tau >= dt * cfg.local_min_steps) {
        const auto nodes = static_cast<std::size_t>(std::floor(tau / dt + 1e-9)) + 1;
        local = prefix(wa_path, nodes);
        cc.step = dt;
    } else {
        cc.step = tau / cfg.local_min_steps;
        local = FieldPath::from_convolution(sample_wa_path(tau, cc.step, dom, noise, local_rng));
        const TauTwo fine = tau_two(local, consts.alpha, dom);
        cc.tau2 = fine.value;
        if (fine.value < local.horizon()) {
            const auto nodes = static_cast<std::size_t>(std::llround(fine.value / cc.step)) + 1;
            local = prefix(local, std::max<std::size_t>(nodes, 2));
        }
    }
    cc.tau = local.horizon();

    cc.picard = picard_solve(u0, local, dom, cfg, consts);
    const Trajectory euler = integrate_on_path(u0, local, dom, cfg.advection);

    double max_diff = 0.0, max_ref = 0.0;
    for (std::size_t i = 0; i < local.size(); ++i) {
        max_diff = std::max(max_diff, h_norm(euler.u_fields[i] - cc.picard.u.fields[i], dom));
        max_ref = std::max(max_ref, h_norm(cc.picard.u.fields[i], dom));
    }
    cc.relative_difference = max_ref > 0.0 ? max_diff / max_ref : max_diff;
    cc.tolerance = std::max(1e-4, 10.0 * cc.step);
    cc.agree = cc.relative_difference <= cc.tolerance;
    return cc;
}

GlobalSolution solve_global(const SpectralField& u0, double T, const DomainSpec& dom, const NoiseSpec& noise,
                            const SolverConfig& cfg, const ConstantsLedger& consts, RngStream& rng) {
    if (!(T > 0.0)) throw std::invalid_argument("solve_global: T must be > 0");
    cfg.validate();
    dom.validate();
    const long steps = std::max(1L, std::lround(T / cfg.dt));
    const double h = T / static_cast<double>(steps);
    const FieldPath wa = FieldPath::from_convolution(sample_wa_path(T, h, dom, noise, rng));
    const Trajectory full = integrate_on_path(u0, wa, dom, cfg.advection);

    GlobalSolution out;
    auto& traj = out.trajectory;
    for (std::size_t i = 0; i < full.size(); ++i) {
        const bool last = i + 1 == full.size();
        if (i % static_cast<std::size_t>(cfg.save_stride) != 0 && !last) continue;
        traj.times.push_back(full.times[i]);
        traj.y_fields.push_back(full.y_fields[i]);
        traj.wa_fields.push_back(full.wa_fields[i]);
        traj.u_fields.push_back(full.u_fields[i]);
    }
    if (cfg.picard_cross_check) {
        RngStream local_rng(rng.seed(), stream_id(StreamPurpose::local_interval, rng.id()));
        out.cross_check = local_cross_check(u0, wa, dom, noise, cfg, consts, local_rng);
    }
    return out;
}

}  // namespace sks

#include "sks/estimates.hpp"

#include "sks/path_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sks {

namespace {
const double fourth_root_27 = std::pow(27.0, 0.25);

void require_nonempty(const FieldPath& p, const char* who) {
    if (p.empty()) throw std::invalid_argument(std::string(who) + ": empty path");
    if (p.times.size() != p.fields.size()) throw std::invalid_argument(std::string(who) + ": times/fields mismatch");
}

void require_same_grid(const FieldPath& a, const FieldPath& b, const char* who) {
    if (a.times != b.times) throw std::invalid_argument(std::string(who) + ": mismatched grids");
}

double severity(const CheckReport& r) {
    if (r.lhs == 0.0) return 0.0;
    if (r.rhs <= 0.0) return std::numeric_limits<double>::infinity();
    return r.lhs / r.rhs;
}

}  // namespace

CheckReport make_report(std::string name, double lhs, double rhs, double slack) {
    CheckReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.pass = lhs <= rhs * (1.0 + slack);
    r.context["slack"] = slack;
    return r;
}

CheckReport aggregate(std::string name, std::span<const CheckReport> reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
    const auto worst = std::max_element(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
        return severity(a) < severity(b);
    });
    CheckReport out = *worst;
    out.name = std::move(name);
    const auto passed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
    out.pass = passed == static_cast<std::ptrdiff_t>(reports.size());
    out.degenerate = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.degenerate; });
    out.context["pass_count"] = static_cast<double>(passed);
    out.context["total"] = static_cast<double>(reports.size());
    out.context["worst_index"] = static_cast<double>(worst - reports.begin());
    return out;
}

// ---------------------------------------------------------------------------

CheckReport check_embedding(const FieldPath& path, const DomainSpec& dom, const ConstantsLedger& ledger,
                            double slack) {
    require_nonempty(path, "check_embedding");
    const double e = enorm(path, dom);
    const double linf = linf_h(path, dom);
    const double l2 = l2_v(path, dom);
    CheckReport r = make_report("embedding", e, ledger.K * (linf + l2), slack);
    r.context["K"] = ledger.K;
    r.context["linf_h"] = linf;
    r.context["l2_v"] = l2;
    r.context["T"] = path.horizon();
    return r;
}

RegularityReports check_semigroup_regularity(const SpectralField& y0, const FieldPath& g_path,
                                             const DomainSpec& dom, const ConstantsLedger& ledger, double slack) {
    require_nonempty(g_path, "check_semigroup_regularity");
    if (y0.modes() != dom.modes) throw std::invalid_argument("check_semigroup_regularity: mismatched grids (modes)");
    for (const auto& g : g_path.fields)
        if (g.modes() != dom.modes)
            throw std::invalid_argument("check_semigroup_regularity: mismatched grids (modes)");
    const double h = g_path.uniform_step();
    const double T = g_path.horizon();

    const FieldPath y{g_path.times, duhamel_integrate(y0, g_path.fields, h, dom)};
    const double lhs = linf_h(y, dom) + l2_v(y, dom);
    const double data = h_norm(y0, dom) + l2_vdual(g_path, dom);
    RegularityReports out;
    out.regularity = make_report("semigroup_regularity", lhs, ledger.L * data, slack);
    out.regularity.context["L"] = ledger.L;
    out.regularity.context["T"] = T;

    const FieldPath s = semigroup_path(y0, g_path.times, dom);
    const double sup_h = linf_h(s, dom), sup_v = linf_v(s, dom);
    const double rhs = 8.0 * ledger.K * std::pow(T, 0.25) * std::pow(std::pow(sup_h, 4) + std::pow(sup_v, 4), 0.25);
    out.semigroup = make_report("semigroup_E_bound", enorm(s, dom), rhs, slack);
    out.semigroup.context["K"] = ledger.K;
    out.semigroup.context["T"] = T;
    return out;
}

CheckReport check_G_lipschitz(const FieldPath& u_path, const FieldPath& v_path, const DomainSpec& dom,
                              double slack) {
    require_nonempty(u_path, "check_G_lipschitz");
    require_same_grid(u_path, v_path, "check_G_lipschitz");
    FieldPath dg;
    dg.times = u_path.times;
    for (std::size_t i = 0; i < u_path.size(); ++i)
        dg.fields.push_back(nonlinear_G(u_path.fields[i], dom) - nonlinear_G(v_path.fields[i], dom));
    const double T = u_path.horizon();
    const double eu = enorm(u_path, dom), ev = enorm(v_path, dom);
    const double ed = enorm(u_path - v_path, dom);
    const double rhs = fourth_root_27 * (eu + ev + dom.shift * std::pow(2.0 * dom.half_length * T, 0.25)) * ed;
    CheckReport r = make_report("G_lipschitz", l2_vdual(dg, dom), rhs, slack);
    r.degenerate = ed == 0.0;
    r.context["T"] = T;
    r.context["u_E"] = eu;
    r.context["v_E"] = ev;
    r.context["diff_E"] = ed;
    return r;
}

ContractionReports check_F_contraction(const FieldPath& z1, const FieldPath& z2, const SpectralField& u0,
                                       const DomainSpec& dom, const ConstantsLedger& ledger,
                                       const SolverConfig& cfg, double slack) {
    require_nonempty(z1, "check_F_contraction");
    require_same_grid(z1, z2, "check_F_contraction");
    const double h = z1.uniform_step();
    const double tau = z1.horizon();
    const double e1 = enorm(z1, dom), e2 = enorm(z2, dom);
    if (e1 > ledger.alpha * (1.0 + 1e-12) || e2 > ledger.alpha * (1.0 + 1e-12))
        throw std::invalid_argument("check_F_contraction: iterates must lie in the ball of radius alpha");
    const double tau1 = tau_one(u0, ledger, dom, tau, h);
    if (tau > tau1 * (1.0 + 1e-9)) throw std::invalid_argument("check_F_contraction: interval exceeds tau1");

    const FieldPath su0 = semigroup_path(u0, z1.times, dom);
    const FieldPath u = z1 + su0, v = z2 + su0;
    const double dz = enorm(z1 - z2, dom);
    const double dF = enorm(apply_F(u, dom, cfg) - apply_F(v, dom, cfg), dom);

    ContractionReports out;
    if (dz == 0.0) {
        out.ratio = make_report("F_contraction", 0.0, 0.5, slack);
        out.ratio.degenerate = true;
    } else {
        out.ratio = make_report("F_contraction", dF / dz, 0.5, slack);
    }
    out.ratio.context["tau"] = tau;
    out.ratio.context["tau1"] = tau1;
    out.ratio.context["z1_E"] = e1;
    out.ratio.context["z2_E"] = e2;
    out.ratio.context["alpha"] = ledger.alpha;

    const double eu = enorm(u, dom), ev = enorm(v, dom);
    const double rhs = ledger.M * (eu + ev + dom.shift * std::pow(2.0 * dom.half_length * tau, 0.25)) * dz;
    out.lipschitz = make_report("F_lipschitz", dF, rhs, slack);
    out.lipschitz.degenerate = dz == 0.0;
    out.lipschitz.context["M"] = ledger.M;
    out.lipschitz.context["tau"] = tau;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct EnergyTerms {
    std::vector<double> f, g;
};

EnergyTerms energy_terms(const Trajectory& traj, const DomainSpec& dom, const ConstantsLedger& ledger) {
    const double cc = ledger.C1 * ledger.C2;
    const double c = dom.shift;
    const double f0 = 2.0 * c + std::pow(2.0 + 0.75 * cc, 2);
    EnergyTerms t;
    for (const auto& w : traj.wa_fields) {
        const double w4 = l4_norm_pow4(w, dom);
        const double w2 = std::pow(h_norm(w, dom), 2);
        t.f.push_back(0.5 * (f0 + cc * w4));
        t.g.push_back(c * w2 + 0.25 * w4);
    }
    return t;
}

void require_trajectory(const Trajectory& traj, const char* who) {
    if (traj.times.empty()) throw std::invalid_argument(std::string(who) + ": empty trajectory");
    if (traj.y_fields.size() != traj.times.size() || traj.wa_fields.size() != traj.times.size())
        throw std::invalid_argument(std::string(who) + ": misaligned trajectory");
}

}  // namespace

EnergyReports check_energy(const Trajectory& traj, const DomainSpec& dom, const ConstantsLedger& ledger,
                           double slack) {
    require_trajectory(traj, "check_energy");
    const EnergyTerms terms = energy_terms(traj, dom, ledger);
    const double int_f = trapezoid(terms.f, traj.times);
    const double int_g = trapezoid(terms.g, traj.times);
    const double u0_sq = std::pow(h_norm(traj.y_fields.front(), dom), 2);

    double sup_sq = 0.0;
    std::vector<double> v_sq;
    for (const auto& y : traj.y_fields) {
        sup_sq = std::max(sup_sq, std::pow(h_norm(y, dom), 2));
        v_sq.push_back(std::pow(v_norm(y, dom), 2));
    }
    const double growth = std::exp(int_f);

    EnergyReports out;
    out.sup_h = make_report("energy_sup_H", sup_sq, u0_sq * growth + growth * int_g, slack);
    out.integral_v = make_report("energy_integral_V", trapezoid(v_sq, traj.times), u0_sq + sup_sq * int_f + int_g,
                                 slack);
    for (auto* r : {&out.sup_h, &out.integral_v}) {
        r->context["int_f"] = int_f;
        r->context["int_g"] = int_g;
        r->context["T"] = traj.times.back();
    }
    return out;
}

EnergyBounds energy_bound_series(const Trajectory& traj, const DomainSpec& dom, const ConstantsLedger& ledger) {
    require_trajectory(traj, "energy_bound_series");
    const EnergyTerms terms = energy_terms(traj, dom, ledger);
    const auto int_f = cumulative_trapezoid(terms.f, traj.times);
    const auto int_g = cumulative_trapezoid(terms.g, traj.times);
    const double u0_sq = std::pow(h_norm(traj.y_fields.front(), dom), 2);
    EnergyBounds out;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double sup_bound = std::exp(int_f[i]) * (u0_sq + int_g[i]);
        out.bound_h.push_back(std::sqrt(sup_bound) + h_norm(traj.wa_fields[i], dom));
        out.bound_v.push_back(std::sqrt(u0_sq + sup_bound * int_f[i] + int_g[i]));
    }
    return out;
}

// ---------------------------------------------------------------------------

DependenceSeries dependence_series(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom) {
    require_trajectory(run0, "dependence_series");
    require_trajectory(run1, "dependence_series");
    if (run0.times != run1.times) throw std::invalid_argument("dependence_series: mismatched grids");
    DependenceSeries s;
    s.times = run0.times;
    const double du0 = h_norm(run0.y_fields.front() - run1.y_fields.front(), dom);
    std::vector<double> w4;
    for (std::size_t i = 0; i < run0.times.size(); ++i) {
        s.difference.push_back(l4_norm(run0.y_fields[i] - run1.y_fields[i], dom));
        w4.push_back(l4_norm_pow4(run0.wa_fields[i] - run1.wa_fields[i], dom));
    }
    const auto we = cumulative_trapezoid(w4, s.times);
    for (double v : we) s.data.push_back(du0 + std::pow(v, 0.25));
    return s;
}

GronwallFit fit_gronwall(std::span<const DependenceSeries> series) {
    std::vector<double> x, y;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.times.size(); ++i)
            if (s.difference[i] > 0.0 && s.data[i] > 0.0) {
                x.push_back(s.times[i]);
                y.push_back(std::log(s.difference[i] / s.data[i]));
            }
    GronwallFit fit;
    fit.points = x.size();
    if (x.empty()) return fit;
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.C3 = sxx > 0.0 ? sxy / sxx : 0.0;
    const double intercept = my - fit.C3 * mx;
    double ss = 0.0, envelope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - intercept - fit.C3 * x[i];
        ss += r * r;
        envelope = std::max(envelope, y[i] - fit.C3 * x[i]);
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.C2 = std::exp(envelope);
    return fit;
}

CheckReport check_continuous_dependence(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom,
                                        const GronwallFit& fit, double slack) {
    const DependenceSeries s = dependence_series(run0, run1, dom);
    double worst = 0.0;
    bool any_signal = false;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        if (s.difference[i] == 0.0) continue;
        any_signal = true;
        const double scale = s.data[i] * std::exp(fit.C3 * s.times[i]);
        worst = std::max(worst, scale > 0.0 ? s.difference[i] / scale : std::numeric_limits<double>::infinity());
    }
    CheckReport r = make_report("continuous_dependence", worst, fit.C2, slack);
    r.degenerate = !any_signal && s.data.back() == 0.0;
    if (r.degenerate) r.pass = true;
    r.context["C2_fit"] = fit.C2;
    r.context["C3_fit"] = fit.C3;
    r.context["residual_rms"] = fit.residual_rms;
    r.context["sup_difference"] = *std::max_element(s.difference.begin(), s.difference.end());
    return r;
}

CheckReport check_continuous_dependence(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom,
                                        double slack) {
    const DependenceSeries s = dependence_series(run0, run1, dom);
    return check_continuous_dependence(run0, run1, dom, fit_gronwall(std::span(&s, 1)), slack);
}

double sup_l4_difference(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom) {
    const DependenceSeries s = dependence_series(run0, run1, dom);
    return *std::max_element(s.difference.begin(), s.difference.end());
}

}  // namespace sks

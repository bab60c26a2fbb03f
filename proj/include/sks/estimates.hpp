#pragma once

// Numerical checkers for the a priori inequalities of the existence argument,
// and empirical calibration of the constants they involve.
//
// Every checker returns a CheckReport with pass <=> lhs <= rhs (1 + slack).

#include "sks/constants.hpp"
#include "sks/mild_solver.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sks {

inline constexpr double default_slack = 0.05;

struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool pass = false;
    bool degenerate = false;
    std::map<std::string, double> context;  // always carries "slack"
};

CheckReport make_report(std::string name, double lhs, double rhs, double slack);

/// Worst member of a sweep (largest lhs / rhs), with pass_count / total in
/// its context. The aggregate passes iff every member passes.
CheckReport aggregate(std::string name, std::span<const CheckReport> reports);

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationOptions {
    int samples = 10000;
    /// Spectral decay of the random Gaussian family, a_k ~ N(0, 1) k^{-decay}.
    double field_decay = 2.0;
    /// Horizon and grid of the (y0, g) pairs used for L.
    double horizon = 1.0;
    int time_steps = 128;
};

struct CalibrationResult {
    ConstantsLedger ledger;
    double max_c2_ratio = 0.0;     // spectral interpolation ratio, <= 1 analytically
    double single_mode_c1 = 0.0;   // closed-form ratio of phi_1
    int samples = 0;
};

/// Random field of the calibration family.
SpectralField random_field(int modes, double decay, RngStream& rng);

/// C1 = max ||v||_{L4} / ||v||_{H^{1/2}}, C2 = 1 after confirming every sampled
/// interpolation ratio is <= 1 + 1e-12, L = max of the regularity ratio over
/// random (y0, g); K, M, alpha by their relations. Sample i draws from
/// stream (seed, calibration:i), so the ledger is schedule independent.
CalibrationResult calibrate_constants(const DomainSpec& dom, std::uint64_t seed,
                                      const CalibrationOptions& opts = {});

/// ||phi_1||_{L4} / ||phi_1||_{H^{1/2}} in closed form.
double single_mode_embedding_ratio(const DomainSpec& dom);

// ---------------------------------------------------------------------------
// Checkers

/// ||u||_E <= K (||u||_{Linf(H)} + ||u||_{L2(V)}).
CheckReport check_embedding(const FieldPath& path, const DomainSpec& dom, const ConstantsLedger& ledger,
                            double slack = default_slack);

struct RegularityReports {
    CheckReport regularity;  // ||y||_{Linf(H)} + ||y||_{L2(V)} <= L (||y0||_H + ||g||_{L2(V')})
    CheckReport semigroup;   // ||S y0||_E <= 8 K T^{1/4} (sup ||S y0||_H^4 + sup ||S y0||_V^4)^{1/4}
};

/// y(t; g) = S(t) y0 + int_0^t S(t - s) g(s) ds on the grid of g_path.
RegularityReports check_semigroup_regularity(const SpectralField& y0, const FieldPath& g_path,
                                             const DomainSpec& dom, const ConstantsLedger& ledger,
                                             double slack = default_slack);

/// ||G(u) - G(v)||_{L2(V')} <= 27^{1/4} (||u||_E + ||v||_E + c (2lT)^{1/4}) ||u - v||_E.
CheckReport check_G_lipschitz(const FieldPath& u_path, const FieldPath& v_path, const DomainSpec& dom,
                              double slack = default_slack);

struct ContractionReports {
    CheckReport ratio;  // ||calF(z1) - calF(z2)||_E / ||z1 - z2||_E <= 1/2
    CheckReport lipschitz;  // ||F(u) - F(v)||_E <= M (||u||_E + ||v||_E + c (2l tau)^{1/4}) ||u - v||_E
};

/// calF(z) = F(z + S(.)u0) on the grid of the z paths, tau = grid horizon.
/// Throws std::invalid_argument unless ||z_i||_E <= alpha and tau <= tau1.
ContractionReports check_F_contraction(const FieldPath& z1, const FieldPath& z2, const SpectralField& u0,
                                       const DomainSpec& dom, const ConstantsLedger& ledger,
                                       const SolverConfig& cfg, double slack = default_slack);

struct EnergyReports {
    CheckReport sup_h;       // sup ||y||_H^2 <= ||u0||^2 e^{int f} + e^{int f} int g
    CheckReport integral_v;  // int ||y||_V^2 <= ||u0||^2 + sup ||y||_H^2 int f + int g
};

/// f(t) = (2c + (2 + 3/4 C1 C2)^2 + C1 C2 ||w_A||_{L4}^4) / 2,
/// g(t) = c ||w_A||_H^2 + ||w_A||_{L4}^4 / 4.
EnergyReports check_energy(const Trajectory& traj, const DomainSpec& dom, const ConstantsLedger& ledger,
                           double slack = default_slack);

struct EnergyBounds {
    std::vector<double> bound_h;  // bound on ||u(t)||_H
    std::vector<double> bound_v;  // bound on (int_0^t ||y||_V^2)^{1/2}
};

/// Running form of the energy bounds at every saved time.
EnergyBounds energy_bound_series(const Trajectory& traj, const DomainSpec& dom, const ConstantsLedger& ledger);

// ---------------------------------------------------------------------------
// Continuous dependence

struct DependenceSeries {
    std::vector<double> times;
    std::vector<double> difference;  // ||y0 - y1||_{L4}(t)
    std::vector<double> data;        // ||u0 - u1||_H + ||w0 - w1||_{E(0,t)}
};

DependenceSeries dependence_series(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom);

struct GronwallFit {
    double C2 = 0.0;
    double C3 = 0.0;
    double residual_rms = 0.0;  // of the log-domain least-squares line
    std::size_t points = 0;
};

/// Least-squares line through log(difference / data) against t gives C3;
/// C2 is the smallest prefactor with no violation on the fitted points.
GronwallFit fit_gronwall(std::span<const DependenceSeries> series);

/// max_t difference / (data e^{C3 t}) against C2. Identical runs produce a
/// degenerate report.
CheckReport check_continuous_dependence(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom,
                                        const GronwallFit& fit, double slack = default_slack);

/// Fits the constants on this pair alone.
CheckReport check_continuous_dependence(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom,
                                        double slack = default_slack);

/// sup_t ||y0 - y1||_{L4}.
double sup_l4_difference(const Trajectory& run0, const Trajectory& run1, const DomainSpec& dom);

}  // namespace sks

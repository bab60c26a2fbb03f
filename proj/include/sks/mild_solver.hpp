#pragma once

// Mild-solution machinery for the transformed equation
//   y_t = A y + G(y + w_A),   y(0) = u0,   u = y + w_A,
// where G(u) = -u u_x + c u.
//
// Two routes are provided: the Picard fixed point z = w_A + F(z + S(.)u0) on a
// short interval, and an exponential-Euler stepper for the full horizon.

#include "sks/constants.hpp"
#include "sks/noise.hpp"
#include "sks/spectral.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace sks {

struct SolverConfig {
    double dt = 1e-3;
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    int save_stride = 1;
    int quad_substeps = 4;
    /// Minimum number of grid steps used on the local Picard interval.
    int local_min_steps = 16;
    bool advection = true;
    bool picard_cross_check = false;

    void validate() const;
};

/// Fields sampled on a time grid starting at 0.
struct FieldPath {
    std::vector<double> times;
    std::vector<SpectralField> fields;

    static FieldPath uniform(double step, std::vector<SpectralField> fields);
    static FieldPath from_convolution(const std::vector<ConvolutionState>& states);

    std::size_t size() const { return fields.size(); }
    bool empty() const { return fields.empty(); }
    double horizon() const { return times.empty() ? 0.0 : times.back(); }

    /// Grid spacing; throws std::invalid_argument unless the grid is uniform.
    double uniform_step() const;

    FieldPath& operator+=(const FieldPath& o);
    FieldPath& operator-=(const FieldPath& o);
    friend FieldPath operator+(FieldPath a, const FieldPath& b) { return a += b; }
    friend FieldPath operator-(FieldPath a, const FieldPath& b) { return a -= b; }
    FieldPath scaled(double s) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> y_fields;
    std::vector<SpectralField> wa_fields;
    std::vector<SpectralField> u_fields;

    std::size_t size() const { return times.size(); }
    FieldPath y_path() const { return {times, y_fields}; }
    FieldPath wa_path() const { return {times, wa_fields}; }
    FieldPath u_path() const { return {times, u_fields}; }
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BlowUpError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PicardDivergence : public NumericalError {
public:
    PicardDivergence(const std::string& what, double last_ratio, int iterations)
        : NumericalError(what), last_ratio(last_ratio), iterations(iterations) {}
    double last_ratio;
    int iterations;
};

/// phi_1(z) = (e^z - 1) / z and phi_2(z) = (e^z - 1 - z) / z^2, accurate near 0.
double phi1(double z);
double phi2(double z);
/// phi_3(z) = (e^z - 1 - z - z^2 / 2) / z^3.
double phi3(double z);

/// y(t_i) = S(t_i) y0 + int_0^{t_i} S(t_i - s) g(s) ds for g piecewise linear
/// between the nodes of a uniform grid with spacing h; exact per mode.
std::vector<SpectralField> duhamel_integrate(const SpectralField& y0, const std::vector<SpectralField>& g_nodes,
                                             double h, const DomainSpec& dom);

/// t -> int_0^t S(t - s) G(u)(s) ds at the grid nodes of `path`. Between nodes u
/// is linear in time, so G(u) is quadratic there; each interval is split into
/// quad_substeps pieces and G is integrated against the exponential kernel
/// through its values at the ends and midpoint of every piece.
FieldPath apply_F(const FieldPath& path, const DomainSpec& dom, const SolverConfig& cfg);

/// S(t) u0 on the given grid.
FieldPath semigroup_path(const SpectralField& u0, const std::vector<double>& times, const DomainSpec& dom);

/// Local existence time from the contraction requirement:
///   (6M [c (2l)^{1/4} + 16K (sup ||S u0||_H^4 + sup ||S u0||_V^4)^{1/4}])^{-4},
/// with the sups taken over the grid 0, dt, ..., T.
double tau_one(const SpectralField& u0, const ConstantsLedger& consts, const DomainSpec& dom, double T, double dt);

struct TauTwo {
    double value = 0.0;
    /// True when a single grid step already exceeds the bound; value is then
    /// the first positive grid time.
    bool below_resolution = false;
};

/// Largest grid time t with trapezoid int_0^t ||w_A||_{L4}^4 ds <= alpha / 2.
TauTwo tau_two(const FieldPath& wa_path, double alpha, const DomainSpec& dom);

struct PicardResult {
    FieldPath z;
    FieldPath u;  // S(.)u0 + z
    int iterations = 0;
    std::vector<double> ratios;  // successive update ratios, n >= 1
    double last_ratio = 0.0;
    double z_enorm = 0.0;
    double residual = 0.0;  // ||z - w_A - F(z + S u0)||_E
    double alpha = 0.0;
    bool in_ball = false;
};

/// Iterates z <- w_A + F(z + S(.)u0) from z = 0 on the grid of `wa_path`
/// until the relative E-norm update drops below picard_tol.
/// Throws PicardDivergence after picard_max_iters.
PicardResult picard_solve(const SpectralField& u0, const FieldPath& wa_path, const DomainSpec& dom,
                          const SolverConfig& cfg, const ConstantsLedger& consts);

/// y_k <- e^{lambda_k h} y_k + h phi_1(lambda_k h) [G(y + wa)]_k.
SpectralField step_exponential_euler(const SpectralField& y, const SpectralField& wa, double h,
                                     const DomainSpec& dom, bool advection = true);

/// Exponential-Euler solution on a prescribed w_A path (uniform grid). Every
/// grid node is returned; no striding.
Trajectory integrate_on_path(const SpectralField& u0, const FieldPath& wa_path, const DomainSpec& dom,
                             bool advection = true);

struct CrossCheck {
    double tau = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double step = 0.0;
    PicardResult picard;
    double relative_difference = 0.0;  // L_inf(0,tau;H), Picard vs exponential Euler
    double tolerance = 0.0;            // max(1e-4, 10 * step)
    bool agree = false;
};

/// Runs Picard and the exponential stepper on [0, min(tau1, tau2, T)] for a
/// shared noise path and compares them. The local grid step is
/// min(dt, tau / local_min_steps); when it equals dt the prefix of
/// `wa_path` is reused, otherwise a local path is drawn from `local_rng`.
CrossCheck local_cross_check(const SpectralField& u0, const FieldPath& wa_path, const DomainSpec& dom,
                             const NoiseSpec& noise, const SolverConfig& cfg, const ConstantsLedger& consts,
                             RngStream& local_rng);

struct GlobalSolution {
    Trajectory trajectory;
    std::optional<CrossCheck> cross_check;
};

/// Samples one w_A path with step cfg.dt, advances y with the exponential
/// stepper on [0, T] and stores every save_stride-th node (and the last).
/// Throws BlowUpError on non-finite or overflowing norms.
GlobalSolution solve_global(const SpectralField& u0, double T, const DomainSpec& dom, const NoiseSpec& noise,
                            const SolverConfig& cfg, const ConstantsLedger& consts, RngStream& rng);

}  // namespace sks

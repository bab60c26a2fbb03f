#pragma once

// Q-Wiener forcing diagonal in the sine basis and its stochastic convolution
//   w_A(t) = int_0^t S(t - s) dw(s).
// Every mode of w_A is an Ornstein-Uhlenbeck process, sampled here with its
// exact Gaussian transition.

#include "sks/rng.hpp"
#include "sks/spectral.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sks {

struct NoiseSpec {
    double sigma = 0.1;
    double decay = 4.0;
    std::vector<double> q;  // covariance eigenvalue per mode, index i <-> k = i + 1

    /// q_k = sigma^2 k^{-decay}. Requires decay > 1 (trace class profile).
    static NoiseSpec power_law(double sigma, double decay, int modes);

    void validate(int modes) const;
};

struct ConvolutionState {
    double time = 0.0;
    SpectralField wa;
    std::uint64_t stream_id = 0;

    static ConvolutionState zero(int modes, std::uint64_t stream_id) {
        return {0.0, SpectralField(modes), stream_id};
    }
};

/// Per-mode decay factor and transition standard deviation for one step h.
struct OuTransition {
    std::vector<double> decay;
    std::vector<double> stddev;

    OuTransition(double h, const DomainSpec& dom, const NoiseSpec& noise);
};

/// One exact OU step: wa_k <- e^{lambda_k h} wa_k + xi_k,
/// xi_k ~ N(0, q_k (1 - e^{2 lambda_k h}) / (2 |lambda_k|)).
/// Draws one normal per mode in mode order, including modes with q_k = 0.
ConvolutionState advance_convolution(const ConvolutionState& state, double h, const DomainSpec& dom,
                                     const NoiseSpec& noise, RngStream& rng);

/// Snapshots at t = 0, h, 2h, ..., floor(T/h) h; the first is identically zero.
std::vector<ConvolutionState> sample_wa_path(double T, double h, const DomainSpec& dom,
                                             const NoiseSpec& noise, RngStream& rng);

/// Least-squares slope of log RMS_s ||w(s + m h) - w(s)||_{L4} against
/// log(m h) over dyadic lags m = 1, 2, 4, ... <= (n - 1) / 4.
/// Throws std::invalid_argument for fewer than 16 snapshots and
/// std::domain_error for a path whose increments vanish.
double holder_exponent_estimate(std::span<const ConvolutionState> path, const DomainSpec& dom);

}  // namespace sks

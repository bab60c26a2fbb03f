#include "sks/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sks {

NoiseSpec NoiseSpec::power_law(double sigma, double decay, int modes) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("noise.sigma must be >= 0");
    if (!(decay > 1.0)) throw std::invalid_argument("noise.decay must exceed 1 (trace class)");
    NoiseSpec out;
    out.sigma = sigma;
    out.decay = decay;
    out.q.resize(static_cast<std::size_t>(modes));
    for (int k = 1; k <= modes; ++k) out.q[static_cast<std::size_t>(k - 1)] = sigma * sigma * std::pow(k, -decay);
    return out;
}

void NoiseSpec::validate(int modes) const {
    if (q.size() != static_cast<std::size_t>(modes))
        throw std::invalid_argument("noise: covariance length does not match mode count");
    for (double v : q)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("noise: q_k must be finite and >= 0");
}

OuTransition::OuTransition(double h, const DomainSpec& dom, const NoiseSpec& noise) {
    if (!(h > 0.0)) throw std::invalid_argument("advance_convolution: step h must be > 0");
    noise.validate(dom.modes);
    decay.resize(noise.q.size());
    stddev.resize(noise.q.size());
    for (int k = 1; k <= dom.modes; ++k) {
        const double lambda = eigenvalue(k, dom);
        if (lambda >= 0.0)
            throw std::invalid_argument("advance_convolution: eigenvalue " + std::to_string(k) + " is not negative");
        const auto i = static_cast<std::size_t>(k - 1);
        decay[i] = std::exp(lambda * h);
        // q (1 - e^{2 lambda h}) / (2 |lambda|)
        stddev[i] = std::sqrt(noise.q[i] * -std::expm1(2.0 * lambda * h) / (-2.0 * lambda));
    }
}

namespace {

void step(ConvolutionState& state, double h, const OuTransition& ou, RngStream& rng) {
    for (std::size_t i = 0; i < state.wa.size(); ++i) {
        const double xi = rng.normal();
        state.wa[i] = ou.decay[i] * state.wa[i] + ou.stddev[i] * xi;
    }
    state.time += h;
}

}  // namespace

ConvolutionState advance_convolution(const ConvolutionState& state, double h, const DomainSpec& dom,
                                     const NoiseSpec& noise, RngStream& rng) {
    if (state.wa.modes() != dom.modes) throw std::invalid_argument("advance_convolution: mode count mismatch");
    const OuTransition ou(h, dom, noise);
    ConvolutionState next = state;
    step(next, h, ou, rng);
    return next;
}

std::vector<ConvolutionState> sample_wa_path(double T, double h, const DomainSpec& dom,
                                             const NoiseSpec& noise, RngStream& rng) {
    if (!(h > 0.0)) throw std::invalid_argument("sample_wa_path: step h must be > 0");
    if (!(T >= h * (1.0 - 1e-12))) throw std::invalid_argument("sample_wa_path: require T >= h");
    const OuTransition ou(h, dom, noise);
    const auto steps = static_cast<std::size_t>(std::floor(T / h + 1e-9));
    std::vector<ConvolutionState> path;
    path.reserve(steps + 1);
    path.push_back(ConvolutionState::zero(dom.modes, rng.id()));
    for (std::size_t n = 1; n <= steps; ++n) {
        ConvolutionState next = path.back();
        step(next, h, ou, rng);
        next.time = static_cast<double>(n) * h;
        path.push_back(std::move(next));
    }
    return path;
}

double holder_exponent_estimate(std::span<const ConvolutionState> path, const DomainSpec& dom) {
    if (path.size() < 16) throw std::invalid_argument("holder_exponent_estimate: need at least 16 snapshots");
    const double h = path[1].time - path[0].time;
    if (!(h > 0.0)) throw std::invalid_argument("holder_exponent_estimate: snapshot times must increase");

    std::vector<double> log_lag, log_increment;
    const std::size_t n = path.size();
    for (std::size_t lag = 1; 4 * lag <= n - 1; lag *= 2) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t s = 0; s + lag < n; ++s) {
            sum += std::sqrt(l4_norm_pow4(path[s + lag].wa - path[s].wa, dom));
            ++count;
        }
        const double rms = std::sqrt(sum / static_cast<double>(count));
        if (!(rms > 0.0))
            throw std::domain_error("holder_exponent_estimate: degenerate path (vanishing increments)");
        log_lag.push_back(std::log(static_cast<double>(lag) * h));
        log_increment.push_back(std::log(rms));
    }
    const auto m = static_cast<double>(log_lag.size());
    const double mx = std::accumulate(log_lag.begin(), log_lag.end(), 0.0) / m;
    const double my = std::accumulate(log_increment.begin(), log_increment.end(), 0.0) / m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log_lag.size(); ++i) {
        sxy += (log_lag[i] - mx) * (log_increment[i] - my);
        sxx += (log_lag[i] - mx) * (log_lag[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace sks

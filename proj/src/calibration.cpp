#include "sks/estimates.hpp"
#include "sks/parallel.hpp"
#include "sks/path_norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sks {

SpectralField random_field(int modes, double decay, RngStream& rng) {
    SpectralField f(modes);
    for (int k = 1; k <= modes; ++k) f.mode(k) = rng.normal() * std::pow(k, -decay);
    return f;
}

double single_mode_embedding_ratio(const DomainSpec& dom) {
    const double l = dom.half_length;
    const double mu2 = std::pow(dom.wavenumber(1), 2);
    return std::pow(0.75 * l, 0.25) / std::sqrt(l * std::sqrt(1.0 + mu2));
}

namespace {

struct SampleRatios {
    double c1 = 0.0;
    double c2 = 0.0;
    double l = 0.0;
};

double embedding_ratio(const SpectralField& v, const DomainSpec& dom) {
    return l4_norm(v, dom) / hs_norm(v, 0.5, dom);
}

double interpolation_ratio(const SpectralField& v, const DomainSpec& dom) {
    return hs_norm(v, 0.5, dom) / std::sqrt(h_norm(v, dom) * v_norm(v, dom));
}

double regularity_ratio(const SpectralField& y0, const std::vector<SpectralField>& g, double h,
                        const DomainSpec& dom) {
    const FieldPath gp = FieldPath::uniform(h, g);
    const FieldPath y = FieldPath::uniform(h, duhamel_integrate(y0, g, h, dom));
    const double lhs = linf_h(y, dom) + l2_v(y, dom);
    const double rhs = h_norm(y0, dom) + l2_vdual(gp, dom);
    return lhs / rhs;
}

void require_nonzero(const SpectralField& f) {
    if (f.is_zero()) throw std::runtime_error("calibrate_constants: degenerate (all-zero) draw");
}

}  // namespace

CalibrationResult calibrate_constants(const DomainSpec& dom, std::uint64_t seed, const CalibrationOptions& opts) {
    dom.validate();
    if (opts.samples < 100) throw std::invalid_argument("calibrate_constants: samples must be >= 100");
    if (opts.time_steps < 1 || !(opts.horizon > 0.0))
        throw std::invalid_argument("calibrate_constants: invalid calibration grid");

    const int n = dom.modes;
    const double h = opts.horizon / opts.time_steps;
    const auto nodes = static_cast<std::size_t>(opts.time_steps) + 1;

    std::vector<SampleRatios> ratios(static_cast<std::size_t>(opts.samples));
    parallel_for(ratios.size(), [&](std::size_t i) {
        RngStream rng(seed, stream_id(StreamPurpose::calibration, i));
        const SpectralField v = random_field(n, opts.field_decay, rng);
        require_nonzero(v);
        SampleRatios& r = ratios[i];
        r.c1 = embedding_ratio(v, dom);
        r.c2 = interpolation_ratio(v, dom);

        // Regularity pair: y0 at a random relative scale, g linear in time.
        SpectralField y0 = random_field(n, opts.field_decay, rng) * std::exp(6.0 * rng.uniform() - 3.0);
        const SpectralField ga = random_field(n, opts.field_decay, rng);
        const SpectralField gb = random_field(n, opts.field_decay, rng);
        require_nonzero(ga);
        std::vector<SpectralField> g;
        g.reserve(nodes);
        for (std::size_t j = 0; j < nodes; ++j) g.push_back(ga + gb * (static_cast<double>(j) / opts.time_steps));
        r.l = regularity_ratio(y0, g, h, dom);
    });

    CalibrationResult result;
    result.samples = opts.samples;
    result.single_mode_c1 = single_mode_embedding_ratio(dom);
    double c1 = 0.0, l = 0.0;
    for (const auto& r : ratios) {
        c1 = std::max(c1, r.c1);
        result.max_c2_ratio = std::max(result.max_c2_ratio, r.c2);
        l = std::max(l, r.l);
    }
    // Pure modes belong to the family: they saturate the interpolation
    // inequality and bound the embedding ratio from below.
    for (int k = 1; k <= n; ++k) {
        const SpectralField phi = SpectralField::single_mode(n, k);
        c1 = std::max(c1, embedding_ratio(phi, dom));
        result.max_c2_ratio = std::max(result.max_c2_ratio, interpolation_ratio(phi, dom));
        const std::vector<SpectralField> no_forcing(nodes, SpectralField(n));
        const std::vector<SpectralField> steady(nodes, phi);
        l = std::max(l, regularity_ratio(phi, no_forcing, h, dom));
        l = std::max(l, regularity_ratio(SpectralField(n), steady, h, dom));
    }
    if (result.max_c2_ratio > 1.0 + 1e-12)
        throw std::logic_error("calibrate_constants: spectral interpolation ratio exceeded 1");

    result.ledger = ConstantsLedger::derive(c1, 1.0, l, Provenance::calibrated, Provenance::analytic,
                                                  Provenance::calibrated);
    return result;
}

}  // namespace sks

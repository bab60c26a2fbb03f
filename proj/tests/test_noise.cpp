#include "sks/mild_solver.hpp"
#include "sks/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sks;

namespace {

const DomainSpec kDom{16.0, 0.5, 64};

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // unbiased
};

Moments moments(const std::vector<double>& x) {
    Moments m;
    for (double v : x) m.mean += v;
    m.mean /= static_cast<double>(x.size());
    for (double v : x) m.var += (v - m.mean) * (v - m.mean);
    m.var /= static_cast<double>(x.size() - 1);
    return m;
}

// Ito isometry: int_0^h q e^{2 lambda s} ds.
double closed_form_variance(double q, double lambda, double h) {
    return q * (1.0 - std::exp(2.0 * lambda * h)) / (-2.0 * lambda);
}

}  // namespace

TEST_CASE("power-law covariance") {
    const NoiseSpec n = NoiseSpec::power_law(0.1, 4.0, 8);
    REQUIRE(n.q.size() == 8);
    CHECK(n.q[0] == doctest::Approx(0.01));
    CHECK(n.q[1] == doctest::Approx(0.01 / 16.0));
    CHECK_THROWS(NoiseSpec::power_law(0.1, 1.0, 8));
    CHECK_THROWS(n.validate(9));
}

TEST_CASE("zero covariance decays deterministically") {
    NoiseSpec noise = NoiseSpec::power_law(0.0, 4.0, kDom.modes);
    RngStream rng(1, 1);
    ConvolutionState s;
    s.wa = SpectralField(kDom.modes);
    for (int k = 1; k <= kDom.modes; ++k) s.wa.mode(k) = 1.0 / k;
    const ConvolutionState next = advance_convolution(s, 0.25, kDom, noise, rng);
    CHECK(next.time == doctest::Approx(0.25));
    for (int k = 1; k <= kDom.modes; ++k)
        CHECK(next.wa.mode(k) == doctest::Approx(std::exp(eigenvalue(k, kDom) * 0.25) / k).epsilon(1e-15));
}

TEST_CASE("one-step variance matches the closed form within 4 standard errors") {
    const NoiseSpec noise = NoiseSpec::power_law(0.1, 4.0, kDom.modes);
    const double h = 1e-3;
    const int samples = 10000;
    RngStream rng(42, stream_id(StreamPurpose::check, 0));
    ConvolutionState zero;
    zero.wa = SpectralField(kDom.modes);
    std::vector<std::vector<double>> draws(kDom.modes);
    for (int s = 0; s < samples; ++s) {
        const ConvolutionState next = advance_convolution(zero, h, kDom, noise, rng);
        for (int k = 1; k <= kDom.modes; ++k) draws[k - 1].push_back(next.wa.mode(k));
    }
    for (int k : {1, 2, 4, 8, 16}) {
        const double expected = closed_form_variance(noise.q[k - 1], eigenvalue(k, kDom), h);
        const Moments m = moments(draws[k - 1]);
        const double se_var = expected * std::sqrt(2.0 / (samples - 1));
        CHECK_MESSAGE(std::abs(m.var - expected) <= 4.0 * se_var, "k=" << k);
        CHECK_MESSAGE(std::abs(m.mean) <= 4.0 * std::sqrt(expected / samples), "k=" << k);
    }
    // Distinct modes are independent.
    const Moments a = moments(draws[0]), b = moments(draws[1]);
    double cov = 0.0;
    for (int s = 0; s < samples; ++s) cov += (draws[0][s] - a.mean) * (draws[1][s] - b.mean);
    const double corr = cov / (samples - 1) / std::sqrt(a.var * b.var);
    CHECK(std::abs(corr) <= 4.0 / std::sqrt(samples));
}

TEST_CASE("stationary variance") {
    const NoiseSpec noise = NoiseSpec::power_law(0.1, 4.0, kDom.modes);
    const int samples = 4000;
    const double T = 40.0;  // 2 |lambda_1| T > 39
    RngStream rng(9, stream_id(StreamPurpose::check, 1));
    std::vector<double> end;
    for (int s = 0; s < samples; ++s) {
        ConvolutionState st;
        st.wa = SpectralField(kDom.modes);
        for (int i = 0; i < 80; ++i) st = advance_convolution(st, T / 80, kDom, noise, rng);
        end.push_back(st.wa.mode(1));
    }
    const double expected = noise.q[0] / (-2.0 * eigenvalue(1, kDom));
    const Moments m = moments(end);
    CHECK(std::abs(m.var - expected) <= 4.0 * expected * std::sqrt(2.0 / (samples - 1)));
}

TEST_CASE("sample paths") {
    const NoiseSpec noise = NoiseSpec::power_law(0.1, 4.0, kDom.modes);
    RngStream rng(2, 5);
    const auto two = sample_wa_path(0.01, 0.01, kDom, noise, rng);
    REQUIRE(two.size() == 2);
    CHECK(two[0].wa.is_zero());
    CHECK(two[0].time == 0.0);
    CHECK(two[1].time == doctest::Approx(0.01));

    RngStream quiet_rng(2, 5);
    for (const auto& s : sample_wa_path(0.1, 0.01, kDom, NoiseSpec::power_law(0.0, 4.0, kDom.modes), quiet_rng))
        CHECK(s.wa.is_zero());

    RngStream r1(77, 3), r2(77, 3), r3(77, 4);
    const auto p1 = sample_wa_path(0.05, 0.01, kDom, noise, r1);
    const auto p2 = sample_wa_path(0.05, 0.01, kDom, noise, r2);
    const auto p3 = sample_wa_path(0.05, 0.01, kDom, noise, r3);
    CHECK(p1.back().wa == p2.back().wa);
    CHECK_FALSE(p1.back().wa == p3.back().wa);
}

TEST_CASE("ensemble mean is zero") {
    const NoiseSpec noise = NoiseSpec::power_law(0.1, 4.0, kDom.modes);
    const int paths = 10000;
    std::vector<double> end;
    for (int p = 0; p < paths; ++p) {
        RngStream rng(31, stream_id(StreamPurpose::path, p));
        end.push_back(sample_wa_path(0.1, 0.01, kDom, noise, rng).back().wa.mode(1));
    }
    const Moments m = moments(end);
    CHECK(std::abs(m.mean) <= 4.0 * std::sqrt(m.var / paths));
    CHECK(m.var == doctest::Approx(closed_form_variance(noise.q[0], eigenvalue(1, kDom), 0.1)).epsilon(0.06));
}

TEST_CASE("Hoelder exponent") {
    SUBCASE("linear path") {
        std::vector<ConvolutionState> path;
        for (int i = 0; i <= 256; ++i) {
            ConvolutionState s;
            s.time = i / 256.0;
            s.wa = SpectralField::single_mode(kDom.modes, 1, s.time);
            path.push_back(s);
        }
        CHECK(holder_exponent_estimate(path, kDom) == doctest::Approx(1.0).epsilon(0.05));
    }
    SUBCASE("zero path is degenerate") {
        RngStream rng(1, 1);
        const auto path = sample_wa_path(0.5, 0.01, kDom, NoiseSpec::power_law(0.0, 4.0, kDom.modes), rng);
        CHECK_THROWS_AS(holder_exponent_estimate(path, kDom), std::domain_error);
    }
    SUBCASE("default noise: median below 1/2") {
        const NoiseSpec noise = NoiseSpec::power_law(0.1, 4.0, kDom.modes);
        std::vector<double> est;
        for (int p = 0; p < 100; ++p) {
            RngStream rng(0, stream_id(StreamPurpose::path, p));
            est.push_back(holder_exponent_estimate(sample_wa_path(1.0, 1e-3, kDom, noise, rng), kDom));
        }
        std::nth_element(est.begin(), est.begin() + 50, est.end());
        MESSAGE("median Hoelder estimate " << est[50]);
        CHECK(est[50] > 0.0);
        CHECK(est[50] < 0.5);
    }
}

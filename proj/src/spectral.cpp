#include "sks/spectral.hpp"

#include "sks/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sks {

void DomainSpec::validate() const {
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw std::invalid_argument("domain.half_length must be positive and finite");
    if (modes < 1) throw std::invalid_argument("domain.modes must be >= 1");
    if (!(shift > 0.25) || !std::isfinite(shift))
        throw std::invalid_argument("domain.shift must exceed 1/4 so that A is strictly negative");
}

double DomainSpec::wavenumber(int k) const {
    return k * std::numbers::pi / (2.0 * half_length);
}

double eigenvalue(int k, const DomainSpec& dom) {
    const double mu2 = std::pow(dom.wavenumber(k), 2);
    return -mu2 * mu2 + mu2 - dom.shift;
}

std::vector<double> eigenvalues(const DomainSpec& dom) {
    std::vector<double> out(static_cast<std::size_t>(dom.modes));
    for (int k = 1; k <= dom.modes; ++k) out[static_cast<std::size_t>(k - 1)] = eigenvalue(k, dom);
    return out;
}

// ---------------------------------------------------------------------------

SpectralField SpectralField::single_mode(int modes, int k, double amplitude) {
    SpectralField f(modes);
    f.mode(k) = amplitude;
    return f;
}

bool SpectralField::all_finite() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); });
}

bool SpectralField::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return v == 0.0; });
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (o.size() != size()) throw std::invalid_argument("SpectralField: mode count mismatch");
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (o.size() != size()) throw std::invalid_argument("SpectralField: mode count mismatch");
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (double& v : coeffs_) v *= s;
    return *this;
}

// ---------------------------------------------------------------------------

SpectralField apply_semigroup(const SpectralField& f, double t, const DomainSpec& dom) {
    if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be >= 0");
    SpectralField out = f;
    for (int k = 1; k <= f.modes(); ++k) out.mode(k) *= std::exp(eigenvalue(k, dom) * t);
    return out;
}

std::vector<double> to_grid(const SpectralField& f, int points) {
    if (points < 1) throw std::invalid_argument("to_grid: points must be >= 1");
    const auto p = static_cast<std::size_t>(points);
    const int period = 2 * (points + 1);
    // Fold modes above the grid's Nyquist index back onto 1..points; the
    // sine nodes see sin((2(P+1)m +- r) pi j/(P+1)) = +-sin(r pi j/(P+1)).
    std::vector<double> folded(p, 0.0);
    for (int k = 1; k <= f.modes(); ++k) {
        const int r = k % period;
        if (r == 0 || r == points + 1) continue;
        if (r <= points)
            folded[static_cast<std::size_t>(r - 1)] += f.mode(k);
        else
            folded[static_cast<std::size_t>(period - r - 1)] -= f.mode(k);
    }
    std::vector<double> values(p);
    transform::dst1(folded, values);
    for (double& v : values) v *= 0.5;
    return values;
}

SpectralField from_grid(std::span<const double> values, int modes) {
    if (values.empty()) throw std::invalid_argument("from_grid: points must be >= 1");
    if (modes < 1) throw std::invalid_argument("from_grid: modes must be >= 1");
    if (values.size() < static_cast<std::size_t>(modes))
        throw std::invalid_argument("from_grid: need at least as many points as modes");
    std::vector<double> spectrum(values.size());
    transform::dst1(values, spectrum);
    const double scale = 1.0 / static_cast<double>(values.size() + 1);
    std::vector<double> coeffs(spectrum.begin(), spectrum.begin() + modes);
    for (double& v : coeffs) v *= scale;
    return SpectralField(std::move(coeffs));
}

// The trapezoid rule on P+1 uniform intervals of [0,1] integrates
// cos(m pi xi) exactly for m < 2(P+1). Projected quadratic products carry
// frequencies up to 3N, quartic integrands up to 4N.
int dealiased_points(int modes) { return (3 * modes) / 2; }

int quartic_points(int modes) { return 2 * modes; }

// ---------------------------------------------------------------------------

namespace {

template <class Weight>
double weighted_norm(const SpectralField& f, const DomainSpec& dom, Weight weight) {
    double sum = 0.0;
    for (int k = 1; k <= f.modes(); ++k) {
        const double a = f.mode(k);
        sum += weight(std::pow(dom.wavenumber(k), 2)) * a * a;
    }
    return std::sqrt(dom.half_length * sum);
}

}  // namespace

double h_norm(const SpectralField& f, const DomainSpec& dom) {
    return weighted_norm(f, dom, [](double) { return 1.0; });
}

double v_norm(const SpectralField& f, const DomainSpec& dom) {
    return weighted_norm(f, dom, [](double mu2) { return 1.0 + mu2; });
}

double vdual_norm(const SpectralField& f, const DomainSpec& dom) {
    return weighted_norm(f, dom, [](double mu2) { return 1.0 / (1.0 + mu2); });
}

double hs_norm(const SpectralField& f, double s, const DomainSpec& dom) {
    return weighted_norm(f, dom, [s](double mu2) { return std::pow(1.0 + mu2, s); });
}

double l4_norm_pow4(const SpectralField& f, const DomainSpec& dom) {
    const int points = quartic_points(f.modes());
    const auto values = to_grid(f, points);
    double sum = 0.0;
    for (double v : values) sum += (v * v) * (v * v);
    return 2.0 * dom.half_length * sum / (points + 1);
}

double l4_norm(const SpectralField& f, const DomainSpec& dom) {
    return std::pow(l4_norm_pow4(f, dom), 0.25);
}

NormReport norms(const SpectralField& f, const DomainSpec& dom) {
    NormReport r;
    r.h_norm = h_norm(f, dom);
    r.v_norm = v_norm(f, dom);
    r.l4_norm = l4_norm(f, dom);
    r.vdual_norm = vdual_norm(f, dom);
    r.hs_quarter = hs_norm(f, 0.25, dom);
    r.hs_half = hs_norm(f, 0.5, dom);
    return r;
}

double inner_product(const SpectralField& f, const SpectralField& g, const DomainSpec& dom) {
    if (f.size() != g.size()) throw std::invalid_argument("inner_product: mode count mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
    return dom.half_length * sum;
}

// ---------------------------------------------------------------------------

SpectralField advection_product(const SpectralField& u, const DomainSpec& dom) {
    const int n = u.modes();
    const int points = dealiased_points(n);
    const auto values = to_grid(u, points);

    // u_x = sum_k a_k mu_k cos(k pi xi): DCT-I over nodes j = 0..P+1.
    std::vector<double> spectrum(static_cast<std::size_t>(points + 2), 0.0);
    for (int k = 1; k <= n; ++k) spectrum[static_cast<std::size_t>(k)] = u.mode(k) * dom.wavenumber(k);
    std::vector<double> slope(spectrum.size());
    transform::dct1(spectrum, slope);

    std::vector<double> product(static_cast<std::size_t>(points));
    for (std::size_t j = 0; j < product.size(); ++j) product[j] = values[j] * 0.5 * slope[j + 1];
    return from_grid(product, n);
}

SpectralField nonlinear_G(const SpectralField& u, const DomainSpec& dom, bool advection) {
    SpectralField out = u * dom.shift;
    if (advection) out -= advection_product(u, dom);
    return out;
}

SpectralField fractional_power_apply(const SpectralField& f, double alpha, const DomainSpec& dom) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("fractional_power_apply: alpha must lie in [0, 1]");
    SpectralField out = f;
    for (int k = 1; k <= f.modes(); ++k) {
        const double lambda = eigenvalue(k, dom);
        if (lambda >= 0.0)
            throw std::invalid_argument("fractional_power_apply: eigenvalue " + std::to_string(k) +
                                        " is not negative; shift too small");
        out.mode(k) *= std::pow(-lambda, alpha);
    }
    return out;
}

}  // namespace sks

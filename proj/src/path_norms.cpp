#include "sks/path_norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sks {

double trapezoid(std::span<const double> values, std::span<const double> times) {
    if (values.size() != times.size()) throw std::invalid_argument("trapezoid: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i)
        sum += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
    return sum;
}

std::vector<double> cumulative_trapezoid(std::span<const double> values, std::span<const double> times) {
    if (values.size() != times.size()) throw std::invalid_argument("cumulative_trapezoid: size mismatch");
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
    return out;
}

namespace {

template <class Norm>
std::vector<double> series(const FieldPath& path, Norm norm) {
    if (path.times.size() != path.fields.size()) throw std::invalid_argument("FieldPath: times/fields mismatch");
    std::vector<double> out(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) out[i] = norm(path.fields[i]);
    return out;
}

double max_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

std::vector<double> h_series(const FieldPath& path, const DomainSpec& dom) {
    return series(path, [&](const SpectralField& f) { return h_norm(f, dom); });
}

std::vector<double> l4_pow4_series(const FieldPath& path, const DomainSpec& dom) {
    return series(path, [&](const SpectralField& f) { return l4_norm_pow4(f, dom); });
}

double enorm_pow4(const FieldPath& path, const DomainSpec& dom) {
    return trapezoid(l4_pow4_series(path, dom), path.times);
}

double enorm(const FieldPath& path, const DomainSpec& dom) { return std::pow(enorm_pow4(path, dom), 0.25); }

double linf_h(const FieldPath& path, const DomainSpec& dom) { return max_of(h_series(path, dom)); }

double linf_v(const FieldPath& path, const DomainSpec& dom) {
    return max_of(series(path, [&](const SpectralField& f) { return v_norm(f, dom); }));
}

double l2_v(const FieldPath& path, const DomainSpec& dom) {
    const auto sq = series(path, [&](const SpectralField& f) { return std::pow(v_norm(f, dom), 2); });
    return std::sqrt(trapezoid(sq, path.times));
}

double l2_vdual(const FieldPath& path, const DomainSpec& dom) {
    const auto sq = series(path, [&](const SpectralField& f) { return std::pow(vdual_norm(f, dom), 2); });
    return std::sqrt(trapezoid(sq, path.times));
}

}  // namespace sks

#pragma once

// Space-time norms of field paths. Time integrals use the trapezoid rule over
// the path's own grid; L_inf norms are maxima over grid nodes.

#include "sks/mild_solver.hpp"

#include <span>
#include <vector>

namespace sks {

double trapezoid(std::span<const double> values, std::span<const double> times);

/// Running trapezoid integral; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> values, std::span<const double> times);

/// ||u||_E^4 = int_0^T ||u(t)||_{L4}^4 dt.
double enorm_pow4(const FieldPath& path, const DomainSpec& dom);
double enorm(const FieldPath& path, const DomainSpec& dom);

double linf_h(const FieldPath& path, const DomainSpec& dom);
double linf_v(const FieldPath& path, const DomainSpec& dom);
double l2_v(const FieldPath& path, const DomainSpec& dom);
double l2_vdual(const FieldPath& path, const DomainSpec& dom);

/// Pointwise-in-time norm series.
std::vector<double> h_series(const FieldPath& path, const DomainSpec& dom);
std::vector<double> l4_pow4_series(const FieldPath& path, const DomainSpec& dom);

}  // namespace sks

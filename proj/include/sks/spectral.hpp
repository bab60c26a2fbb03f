#pragma once

// Sine-basis spectral representation on I = (-l, l).
//
// Mode k (k = 1..N) is phi_k(x) = sin(mu_k (x + l)) with mu_k = k pi / (2l).
// The basis diagonalizes d^2/dx^2, d^4/dx^4 and therefore the operator
//   A u = -u_xxxx - u_xx - c u,
// whose eigenvalues are lambda_k = -mu_k^4 + mu_k^2 - c. Functions in this
// basis satisfy u = u_xx = 0 at both endpoints.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sks {

struct DomainSpec {
    double half_length = 16.0;  // l
    double shift = 0.5;         // c
    int modes = 64;             // N

    /// Throws std::invalid_argument on l <= 0, N < 1 or c <= 1/4.
    void validate() const;

    /// mu_k = k pi / (2 l).
    double wavenumber(int k) const;
};

/// lambda_k = -mu_k^4 + mu_k^2 - c.
double eigenvalue(int k, const DomainSpec& dom);

/// All N eigenvalues, index i holding mode k = i + 1.
std::vector<double> eigenvalues(const DomainSpec& dom);

/// Real coefficient vector; storage index i holds mode k = i + 1.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(int modes) : coeffs_(static_cast<std::size_t>(modes), 0.0) {}
    explicit SpectralField(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    /// Field equal to amplitude * phi_k.
    static SpectralField single_mode(int modes, int k, double amplitude = 1.0);

    int modes() const { return static_cast<int>(coeffs_.size()); }
    std::size_t size() const { return coeffs_.size(); }

    double& operator[](std::size_t i) { return coeffs_[i]; }
    double operator[](std::size_t i) const { return coeffs_[i]; }

    /// 1-based mode access.
    double& mode(int k) { return coeffs_.at(static_cast<std::size_t>(k - 1)); }
    double mode(int k) const { return coeffs_.at(static_cast<std::size_t>(k - 1)); }

    std::span<double> coeffs() { return coeffs_; }
    std::span<const double> coeffs() const { return coeffs_; }
    const std::vector<double>& vector() const { return coeffs_; }

    bool all_finite() const;
    bool is_zero() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
    friend bool operator==(const SpectralField&, const SpectralField&) = default;

private:
    std::vector<double> coeffs_;
};

/// coeffs_k <- coeffs_k * exp(lambda_k t).
SpectralField apply_semigroup(const SpectralField& f, double t, const DomainSpec& dom);

/// Values at the interior nodes x_j = -l + 2l j / (points + 1), j = 1..points.
std::vector<double> to_grid(const SpectralField& f, int points);

/// Discrete sine projection of interior nodal values onto the first `modes`
/// modes. Requires values.size() >= modes.
SpectralField from_grid(std::span<const double> values, int modes);

/// Node count of the 3/2-padded grid on which quadratic products are exact.
int dealiased_points(int modes);

/// Node count on which quartic integrands are integrated exactly.
int quartic_points(int modes);

struct NormReport {
    double h_norm = 0.0;       // L2(I)
    double v_norm = 0.0;       // H^1_0(I), including the L2 part
    double l4_norm = 0.0;      // L4(I)
    double vdual_norm = 0.0;   // V'
    double hs_quarter = 0.0;   // spectral H^{1/4}
    double hs_half = 0.0;      // spectral H^{1/2}
};

double h_norm(const SpectralField& f, const DomainSpec& dom);
double v_norm(const SpectralField& f, const DomainSpec& dom);
double vdual_norm(const SpectralField& f, const DomainSpec& dom);
/// sqrt(l sum (1 + mu_k^2)^s a_k^2).
double hs_norm(const SpectralField& f, double s, const DomainSpec& dom);
/// Exact for fields in the span: uses quartic_points(N) nodes.
double l4_norm(const SpectralField& f, const DomainSpec& dom);
/// Integral of u^4 over I.
double l4_norm_pow4(const SpectralField& f, const DomainSpec& dom);

NormReport norms(const SpectralField& f, const DomainSpec& dom);

/// L2 inner product over I.
double inner_product(const SpectralField& f, const SpectralField& g, const DomainSpec& dom);

/// Galerkin projection of u u_x, evaluated on the 3/2-padded grid.
SpectralField advection_product(const SpectralField& u, const DomainSpec& dom);

/// G(u) = -u u_x + c u. With advection == false only c u is returned.
SpectralField nonlinear_G(const SpectralField& u, const DomainSpec& dom, bool advection = true);

/// coeffs_k <- (-lambda_k)^alpha coeffs_k, alpha in [0, 1].
SpectralField fractional_power_apply(const SpectralField& f, double alpha, const DomainSpec& dom);

}  // namespace sks

#pragma once

#include <string>

namespace sks {

enum class Provenance { analytic, calibrated };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Analysis constants of the existence argument.
///   C1: ||v||_{L4} <= C1 ||v||_{H^{1/2}}
///   C2: ||v||_{H^{1/2}} <= C2 ||v||_H^{1/2} ||v||_V^{1/2}
///   L : ||y||_{Linf(H)} + ||y||_{L2(V)} <= L (||y0||_H + ||g||_{L2(V')})
/// K, M and alpha are derived and always satisfy the stored relations.
struct ConstantsLedger {
    double C1 = 0.0;
    double C2 = 0.0;
    double K = 0.0;
    double L = 0.0;
    double M = 0.0;
    double alpha = 0.0;
    Provenance C1_source = Provenance::calibrated;
    Provenance C2_source = Provenance::analytic;
    Provenance L_source = Provenance::calibrated;

    /// K = C1 C2 / 2, M = 27^{1/4} K L, alpha = 1 / (6 M).
    static ConstantsLedger derive(double C1, double C2, double L,
                                        Provenance c1 = Provenance::calibrated,
                                        Provenance c2 = Provenance::analytic,
                                        Provenance l = Provenance::calibrated);

    /// Bitwise check of the derived entries against their relations.
    bool relations_hold() const;
    void validate() const;
};

}  // namespace sks

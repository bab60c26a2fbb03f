#include "sks/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace sks {

std::string to_string(Provenance p) { return p == Provenance::analytic ? "analytic" : "calibrated"; }

Provenance provenance_from_string(const std::string& s) {
    if (s == "analytic") return Provenance::analytic;
    if (s == "calibrated") return Provenance::calibrated;
    throw std::invalid_argument("unknown provenance '" + s + "'");
}

namespace {
const double fourth_root_27 = std::pow(27.0, 0.25);
}

ConstantsLedger ConstantsLedger::derive(double C1, double C2, double L, Provenance c1, Provenance c2,
                                              Provenance l) {
    ConstantsLedger led;
    led.C1 = C1;
    led.C2 = C2;
    led.L = L;
    led.K = C1 * C2 / 2.0;
    led.M = fourth_root_27 * led.K * L;
    led.alpha = 1.0 / (6.0 * led.M);
    led.C1_source = c1;
    led.C2_source = c2;
    led.L_source = l;
    led.validate();
    return led;
}

bool ConstantsLedger::relations_hold() const {
    return K == C1 * C2 / 2.0 && M == fourth_root_27 * K * L && alpha == 1.0 / (6.0 * M);
}

void ConstantsLedger::validate() const {
    for (double v : {C1, C2, K, L, M, alpha})
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("constants ledger entries must be positive");
}

}  // namespace sks

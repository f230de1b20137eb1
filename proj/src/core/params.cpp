#include "qfp/params.hpp"

#include <cmath>
#include <string>

#include "qfp/errors.hpp"

namespace qfp {

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string("derive_params: ") + field + " must be positive and finite, got " +
                          std::to_string(v));
    }
}

}  // namespace

double PhysicalParams::semiclassical_threshold() const noexcept {
    return lambdaT * lambdaT / (2.0 * D);
}

PhysicalParams derive_params(double m, double b, double kT, double hbar) {
    require_positive(m, "m");
    require_positive(b, "b");
    require_positive(kT, "kT");
    if (!(hbar >= 0.0) || !std::isfinite(hbar)) {
        throw DomainError("derive_params: hbar must be nonnegative and finite, got " + std::to_string(hbar));
    }
    PhysicalParams p;
    p.m = m;
    p.b = b;
    p.kT = kT;
    p.hbar = hbar;
    p.D = kT / b;
    p.lambdaT = hbar / (2.0 * std::sqrt(m * kT));
    p.beta = 1.0 / kT;
    return p;
}

}  // namespace qfp

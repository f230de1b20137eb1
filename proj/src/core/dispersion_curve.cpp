#include "qfp/dispersion_curve.hpp"

#include <cmath>

#include "qfp/errors.hpp"

namespace qfp {

void DispersionCurve::append(double t, double sigma2) {
    if (!std::isfinite(t) || !std::isfinite(sigma2) || sigma2 < 0.0) {
        throw DomainError("DispersionCurve '" + label_ + "': non-finite or negative sample");
    }
    if (!samples_.empty() && !(t > samples_.back().t)) {
        throw DomainError("DispersionCurve '" + label_ + "': times must be strictly increasing");
    }
    samples_.push_back({t, sigma2});
}

bool DispersionCurve::is_nondecreasing() const noexcept {
    for (std::size_t i = 1; i < samples_.size(); ++i)
        if (samples_[i].sigma2 < samples_[i - 1].sigma2) return false;
    return true;
}

}  // namespace qfp

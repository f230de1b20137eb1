#include "qfp/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfp/errors.hpp"

namespace qfp {

DensityProfile DensityProfile::normalized(SpatialGrid grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw DomainError("DensityProfile: size mismatch with grid");
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError("DensityProfile: values must be finite and >= 0");
    }
    const double mass = grid.integrate(values);
    if (!(mass > 0.0)) throw DomainError("DensityProfile: zero total mass");
    for (double& v : values) v /= mass;
    return {grid, std::move(values)};
}

DensityProfile DensityProfile::adopt(SpatialGrid grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw DomainError("DensityProfile: size mismatch with grid");
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) throw IntegrityError("DensityProfile: negative or non-finite value");
    }
    const double mass = grid.integrate(values);
    if (std::abs(mass - 1.0) > kNormTolerance) {
        throw IntegrityError("DensityProfile: mass " + std::to_string(mass) + " is not normalized");
    }
    return {grid, std::move(values)};
}

DensityProfile DensityProfile::gaussian(SpatialGrid grid, double mean, double sigma2) {
    if (!(sigma2 > 0.0)) throw DomainError("DensityProfile::gaussian: variance must be positive");
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = grid.node(i) - mean;
        v[i] = std::exp(-0.5 * d * d / sigma2);
    }
    return normalized(grid, std::move(v));
}

double DensityProfile::max() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

Moments moments(const DensityProfile& rho) {
    const auto& g = rho.grid();
    const auto v = rho.values();
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = g.weight(i) * v[i];
        m0 += w;
        m1 += w * g.node(i);
    }
    const double mean = m1 / m0;
    double c2 = 0.0, c4 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = g.node(i) - mean;
        const double d2 = d * d;
        const double w = g.weight(i) * v[i];
        c2 += w * d2;
        c4 += w * d2 * d2;
    }
    c2 /= m0;
    c4 /= m0;
    Moments out;
    out.mean = mean;
    out.sigma2 = c2;
    out.excessKurtosis = c4 / (c2 * c2) - 3.0;
    out.underResolved = c2 < 4.0 * g.spacing() * g.spacing();
    return out;
}

}  // namespace qfp

#include "qfp/reference_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qfp/errors.hpp"

namespace qfp {

double ReferenceDensity::free_variance(double t) const {
    const auto* fp = std::get_if<FreeParticle>(&kind_);
    if (fp == nullptr) throw DomainError("ReferenceDensity: Boltzmann kind has no free-particle variance");
    const double tau = t + fp->timeOffset;
    if (!(tau > 0.0)) {
        throw DomainError("ReferenceDensity: free-particle density is singular at t + offset <= 0");
    }
    return 2.0 * params_.D * tau;
}

DensityProfile ReferenceDensity::evaluate(const SpatialGrid& grid, double t) const {
    std::vector<double> v(grid.size());
    if (is_free_particle()) {
        const double var = free_variance(t);
        const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = grid.node(i);
            v[i] = norm * std::exp(-0.5 * x * x / var);
        }
        return DensityProfile::normalized(grid, std::move(v));
    }
    const auto& pot = std::get<Boltzmann>(kind_).potential;
    double vmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = pot.value(grid.node(i));
        vmin = std::min(vmin, v[i]);
    }
    for (double& e : v) e = std::exp(-(e - vmin) / params_.kT);
    return DensityProfile::normalized(grid, std::move(v));
}

}  // namespace qfp

#pragma once

#include <variant>

#include "qfp/density.hpp"
#include "qfp/params.hpp"
#include "qfp/potential.hpp"

namespace qfp {

/// Classical reference density used by the log-curvature model variants.
class ReferenceDensity {
public:
    /// Free-particle heat kernel with variance 2 D (t + timeOffset).
    struct FreeParticle {
        double timeOffset = 0.0;
    };
    /// exp(-V/kT)/Z, time independent.
    struct Boltzmann {
        Potential potential;
    };

    static ReferenceDensity free_particle(const PhysicalParams& params, double timeOffset = 0.0) {
        return ReferenceDensity(params, FreeParticle{timeOffset});
    }
    static ReferenceDensity boltzmann(const PhysicalParams& params, Potential v) {
        return ReferenceDensity(params, Boltzmann{std::move(v)});
    }

    /// Samples the density at time t. The free-particle kind rejects t + offset <= 0
    /// (the heat kernel is a delta function there).
    [[nodiscard]] DensityProfile evaluate(const SpatialGrid& grid, double t) const;

    /// Variance of the free-particle kind at time t; DomainError for the Boltzmann kind.
    [[nodiscard]] double free_variance(double t) const;

    /// Offset of the free-particle kind (0 for Boltzmann).
    [[nodiscard]] double time_offset() const noexcept {
        const auto* fp = std::get_if<FreeParticle>(&kind_);
        return fp ? fp->timeOffset : 0.0;
    }
    [[nodiscard]] bool is_free_particle() const noexcept {
        return std::holds_alternative<FreeParticle>(kind_);
    }
    [[nodiscard]] const PhysicalParams& params() const noexcept { return params_; }

private:
    using Kind = std::variant<FreeParticle, Boltzmann>;
    ReferenceDensity(const PhysicalParams& params, Kind kind) : params_(params), kind_(std::move(kind)) {}

    PhysicalParams params_;
    Kind kind_;
};

}  // namespace qfp

#pragma once

#include <span>
#include <vector>

#include "qfp/grid.hpp"

namespace qfp {

/// Normalized, nonnegative probability density sampled on a uniform grid.
class DensityProfile {
public:
    static constexpr double kNormTolerance = 1e-8;

    /// Validates finiteness and nonnegativity, then rescales to unit trapezoidal mass.
    static DensityProfile normalized(SpatialGrid grid, std::vector<double> values);

    /// Adopts values that are already normalized; throws IntegrityError when the
    /// mass deviates from 1 by more than kNormTolerance or any value is negative/NaN.
    static DensityProfile adopt(SpatialGrid grid, std::vector<double> values);

    /// Gaussian with the given mean and variance, normalized on the grid.
    static DensityProfile gaussian(SpatialGrid grid, double mean, double sigma2);

    [[nodiscard]] const SpatialGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double mass() const { return grid_.integrate(values_); }
    [[nodiscard]] double max() const noexcept;

private:
    DensityProfile(SpatialGrid grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {}

    SpatialGrid grid_;
    std::vector<double> values_;
};

struct Moments {
    double mean = 0.0;
    double sigma2 = 0.0;
    double excessKurtosis = 0.0;
    bool underResolved = false;  ///< sigma2 below 4 h^2
};

[[nodiscard]] Moments moments(const DensityProfile& rho);

}  // namespace qfp

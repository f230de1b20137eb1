#pragma once

#include <vector>

#include "qfp/density.hpp"
#include "qfp/params.hpp"

namespace qfp {

/// Real values on a grid; units depend on the producing operation.
struct FieldOnGrid {
    SpatialGrid grid;
    std::vector<double> values;

    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

namespace functionals {

/// Densities are clamped below at floor * max(rho) before ln or sqrt.
inline constexpr double kDefaultFloor = 1e-12;

/// d^2/dx^2 ln rho. Central differences inside, one-sided second order at the ends.
[[nodiscard]] FieldOnGrid log_curvature(const DensityProfile& rho, double floor = kDefaultFloor);

/// Nodes whose three-point stencil lies entirely above the clamp. Log-based
/// quantities are only meaningful there.
[[nodiscard]] std::vector<bool> resolved_nodes(const DensityProfile& rho, double floor = kDefaultFloor);

/// Fisher information in gradient form, integral of rho (d ln rho/dx)^2.
[[nodiscard]] double fisher_information(const DensityProfile& rho);

/// Fisher information as -integral of rho d^2 ln rho/dx^2.
[[nodiscard]] double fisher_information_curvature_form(const DensityProfile& rho,
                                                       double floor = kDefaultFloor);

/// -integral rho ln rho, with 0 ln 0 = 0.
[[nodiscard]] double shannon_information(const DensityProfile& rho);

/// Bohm potential Q = -hbar^2 (sqrt rho)'' / (2 m sqrt rho).
[[nodiscard]] FieldOnGrid bohm_potential(const DensityProfile& rho, const PhysicalParams& params,
                                         double floor = kDefaultFloor);

/// Local quantum temperature k_B T_Q = -(hbar^2/4m) d^2 ln rho/dx^2.
[[nodiscard]] FieldOnGrid quantum_temperature(const DensityProfile& rho, const PhysicalParams& params,
                                              double floor = kDefaultFloor);

/// Trapezoidal mean of a field against rho.
[[nodiscard]] double expectation(const DensityProfile& rho, const FieldOnGrid& field);

}  // namespace functionals
}  // namespace qfp

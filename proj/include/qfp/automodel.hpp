#pragma once

#include <array>
#include <vector>

#include "qfp/dispersion_curve.hpp"
#include "qfp/ode.hpp"
#include "qfp/params.hpp"

namespace qfp::automodel {

/// y y'' - y'^2 - y^2/x^2 + 4 y' + 1/x^2, exactly as written. DomainError for x <= 0.
[[nodiscard]] double residual(double x, double y, double yP, double yPP);

struct SeriesValue {
    double y;
    double yPrime;
};

/// Truncated local solution 1 + c2 x^2 - 2 c2 x^3 at x0 in (0, 0.1].
[[nodiscard]] SeriesValue series_start(double c2, double x0);

struct Settings {
    double x0 = 1e-3;
    double xMax = 20.0;
    std::size_t meshIntervals = 20000;  ///< output nodes x_k = x0 + (xMax - x0)(k/N)^2
    ode::Options ode{};
};

/// Solution sampled on the output mesh.
class Solution {
public:
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yPrime;
    double c2 = 0.0;

    /// y and y' at any x in (0, xMax]. Cubic Hermite between mesh nodes, the local
    /// series below the first node.
    [[nodiscard]] SeriesValue at(double xq) const;
    /// Second derivative from the stored y' by three-point differences (nonuniform mesh).
    [[nodiscard]] std::vector<double> second_derivative() const;
    /// |residual| / (1 + y^2/x^2) at every node.
    [[nodiscard]] std::vector<double> scaled_residuals() const;
    [[nodiscard]] double x_max() const { return x.back(); }
};

/// Integrates from the series start. Throws ShootingError if y collapses to 1e-12
/// or blows past 1e150 before xMax, StiffnessError on step underflow.
[[nodiscard]] Solution integrate_from(double c2, const Settings& settings = {});

struct ShotDiagnostics {
    int evaluations = 0;
    double objective = 0.0;  ///< y'(xMax) - 2 of the returned solution
    std::array<double, 2> bracket{};
};

struct ShotResult {
    double c2Star;
    Solution solution;
    ShotDiagnostics diagnostics;
};

/// Bisection on c2 for y'(xMax) = 2 starting from the bracket [0, 64], widened by
/// doubling if needed. Bisects until the bracket collapses and keeps the best run.
[[nodiscard]] ShotResult shoot(const Settings& settings = {});

/// Universal coordinates: s = 2Dt/lambda^2 = 8x^2, u = sigma^2/lambda^2 = 4xy.
struct Figure1 {
    DispersionCurve numeric;    // solid
    DispersionCurve lambert;    // dashed
    DispersionCurve classical;  // dotted
};

/// Samples s_k = sMax ((k+1)/n)^2, k = 0..n-1. DomainError when sMax > 8 xMax^2.
[[nodiscard]] Figure1 figure1_curves(const Solution& sol, double sMax, std::size_t nSamples);

/// sigma^2(t) = hbar sqrt(t/mb) y(x) with x = sqrt(D t)/(2 lambda).
[[nodiscard]] double sigma2_at(const Solution& sol, const PhysicalParams& p, double t);

}  // namespace qfp::automodel

#pragma once

#include <span>
#include <vector>

#include "qfp/density.hpp"
#include "qfp/grid.hpp"

namespace qfp {

/// Phase-space grid: position axis, momentum axis. Values are stored x-major,
/// index(i, j) = i * p.size() + j.
struct PhaseGrid {
    UniformGrid x;
    UniformGrid p;

    [[nodiscard]] std::size_t size() const noexcept { return x.size() * p.size(); }
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * p.size() + j;
    }
    /// 2D trapezoidal rule.
    [[nodiscard]] double integrate(std::span<const double> f) const;

    friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

/// Normalized real field W(x, p). Sign is not constrained.
class WignerField {
public:
    static constexpr double kNormTolerance = 1e-8;

    /// Rescales to unit mass; throws DomainError on non-finite values or nonpositive mass.
    static WignerField normalized(PhaseGrid grid, std::vector<double> values);
    /// Adopts values that must already integrate to 1 within kNormTolerance.
    static WignerField adopt(PhaseGrid grid, std::vector<double> values);

    /// Product of a Gaussian in x and a zero-mean Gaussian in p.
    static WignerField gaussian(PhaseGrid grid, double xMean, double xSigma2, double pSigma2);

    [[nodiscard]] const PhaseGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const noexcept {
        return values_[grid_.index(i, j)];
    }
    [[nodiscard]] double mass() const { return grid_.integrate(values_); }

private:
    WignerField(PhaseGrid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {}

    PhaseGrid grid_;
    std::vector<double> values_;
};

struct MarginalX {
    DensityProfile density;
    double renormalization = 1.0;  ///< factor applied after p-quadrature
};

/// rho(x) = integral of W over p. Negative values below -1e-10 raise IntegrityError;
/// smaller negatives are clipped to zero before renormalization.
[[nodiscard]] MarginalX marginal_x(const WignerField& w);

/// Momentum marginal, same conventions as marginal_x.
[[nodiscard]] MarginalX marginal_p(const WignerField& w);

}  // namespace qfp

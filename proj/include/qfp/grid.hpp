#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qfp {

/// Uniform node-centred grid on [lo, hi]. Used for both position and momentum axes.
class UniformGrid {
public:
    static constexpr std::size_t kMinNodes = 8;

    UniformGrid(double lo, double hi, std::size_t n);

    /// Symmetric grid [-halfWidth, halfWidth].
    static UniformGrid symmetric(double halfWidth, std::size_t n) { return {-halfWidth, halfWidth, n}; }

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] double length() const noexcept { return hi_ - lo_; }
    [[nodiscard]] double node(std::size_t i) const noexcept;
    [[nodiscard]] std::vector<double> nodes() const;

    /// Trapezoidal rule over the whole grid.
    [[nodiscard]] double integrate(std::span<const double> f) const;

    /// Trapezoidal weight of node i (h inside, h/2 at the ends).
    [[nodiscard]] double weight(std::size_t i) const noexcept {
        return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_;
    }

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

private:
    double lo_;
    double hi_;
    std::size_t n_;
    double h_;
};

using SpatialGrid = UniformGrid;

}  // namespace qfp

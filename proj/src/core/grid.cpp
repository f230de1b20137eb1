#include "qfp/grid.hpp"

#include <cmath>
#include <string>

#include "qfp/errors.hpp"

namespace qfp {

UniformGrid::UniformGrid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n), h_(0.0) {
    if (n < kMinNodes) {
        throw DomainError("UniformGrid: need at least " + std::to_string(kMinNodes) + " nodes, got " +
                          std::to_string(n));
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        throw DomainError("UniformGrid: require finite lo < hi");
    }
    h_ = (hi - lo) / static_cast<double>(n - 1);
}

double UniformGrid::node(std::size_t i) const noexcept {
    // Last node pinned so that hi is reproduced exactly.
    if (i + 1 == n_) return hi_;
    return lo_ + static_cast<double>(i) * h_;
}

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = node(i);
    return xs;
}

double UniformGrid::integrate(std::span<const double> f) const {
    if (f.size() != n_) throw DomainError("UniformGrid::integrate: size mismatch");
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < n_; ++i) interior += f[i];
    return h_ * (interior + 0.5 * (f.front() + f.back()));
}

}  // namespace qfp

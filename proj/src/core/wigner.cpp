#include "qfp/wigner.hpp"

#include <cmath>
#include <string>

#include "qfp/errors.hpp"

namespace qfp {

double PhaseGrid::integrate(std::span<const double> f) const {
    if (f.size() != size()) throw DomainError("PhaseGrid::integrate: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) row += p.weight(j) * f[index(i, j)];
        sum += x.weight(i) * row;
    }
    return sum;
}

WignerField WignerField::normalized(PhaseGrid grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw DomainError("WignerField: size mismatch with grid");
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("WignerField: non-finite value");
    }
    const double mass = grid.integrate(values);
    if (!(mass > 0.0)) throw DomainError("WignerField: nonpositive total mass");
    for (double& v : values) v /= mass;
    return {std::move(grid), std::move(values)};
}

WignerField WignerField::adopt(PhaseGrid grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw DomainError("WignerField: size mismatch with grid");
    for (double v : values) {
        if (!std::isfinite(v)) throw IntegrityError("WignerField: non-finite value");
    }
    const double mass = grid.integrate(values);
    if (std::abs(mass - 1.0) > kNormTolerance) {
        throw IntegrityError("WignerField: mass " + std::to_string(mass) + " is not normalized");
    }
    return {std::move(grid), std::move(values)};
}

WignerField WignerField::gaussian(PhaseGrid grid, double xMean, double xSigma2, double pSigma2) {
    if (!(xSigma2 > 0.0) || !(pSigma2 > 0.0)) {
        throw DomainError("WignerField::gaussian: variances must be positive");
    }
    std::vector<double> gx(grid.x.size()), gp(grid.p.size());
    for (std::size_t i = 0; i < gx.size(); ++i) {
        const double d = grid.x.node(i) - xMean;
        gx[i] = std::exp(-0.5 * d * d / xSigma2);
    }
    for (std::size_t j = 0; j < gp.size(); ++j) {
        const double q = grid.p.node(j);
        gp[j] = std::exp(-0.5 * q * q / pSigma2);
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < gx.size(); ++i)
        for (std::size_t j = 0; j < gp.size(); ++j) v[grid.index(i, j)] = gx[i] * gp[j];
    return normalized(std::move(grid), std::move(v));
}

namespace {

constexpr double kClip = -1e-10;

MarginalX finish_marginal(const UniformGrid& axis, std::vector<double> rho, const char* which) {
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!std::isfinite(rho[i]) || rho[i] < kClip) {
            throw IntegrityError(std::string(which) + ": marginal value " + std::to_string(rho[i]) +
                                 " at node " + std::to_string(i) + " (solver blow-up)");
        }
        if (rho[i] < 0.0) rho[i] = 0.0;
    }
    const double mass = axis.integrate(rho);
    if (!(mass > 0.0)) throw IntegrityError(std::string(which) + ": marginal has no mass");
    for (double& v : rho) v /= mass;
    return {DensityProfile::adopt(axis, std::move(rho)), 1.0 / mass};
}

}  // namespace

MarginalX marginal_x(const WignerField& w) {
    const auto& g = w.grid();
    std::vector<double> rho(g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i)
        rho[i] = g.p.integrate(w.values().subspan(g.index(i, 0), g.p.size()));
    return finish_marginal(g.x, std::move(rho), "marginal_x");
}

MarginalX marginal_p(const WignerField& w) {
    const auto& g = w.grid();
    std::vector<double> rho(g.p.size(), 0.0);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double wx = g.x.weight(i);
        for (std::size_t j = 0; j < g.p.size(); ++j) rho[j] += wx * w.at(i, j);
    }
    return finish_marginal(g.p, std::move(rho), "marginal_p");
}

}  // namespace qfp

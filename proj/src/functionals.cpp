#include "qfp/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "qfp/errors.hpp"

namespace qfp::functionals {

namespace {

void check_floor(double floor) {
    if (!(floor > 0.0) || floor > 1e-3) throw DomainError("functionals: floor must lie in (0, 1e-3]");
}

std::vector<double> clamped(const DensityProfile& rho, double floor) {
    check_floor(floor);
    const double lo = floor * rho.max();
    std::vector<double> v(rho.values().begin(), rho.values().end());
    for (double& e : v) e = std::max(e, lo);
    return v;
}

// Second derivative, one-sided second order at the two ends.
std::vector<double> second_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    const double inv = 1.0 / (h * h);
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return d;
}

std::vector<double> first_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    const double inv = 0.5 / h;
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    return d;
}

std::vector<double> log_of(std::vector<double> v) {
    for (double& e : v) e = std::log(e);
    return v;
}

}  // namespace

FieldOnGrid log_curvature(const DensityProfile& rho, double floor) {
    return {rho.grid(), second_derivative(log_of(clamped(rho, floor)), rho.grid().spacing())};
}

std::vector<bool> resolved_nodes(const DensityProfile& rho, double floor) {
    check_floor(floor);
    const double lo = floor * rho.max();
    const std::size_t n = rho.size();
    std::vector<bool> above(n), ok(n);
    for (std::size_t i = 0; i < n; ++i) above[i] = rho[i] > lo;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i == 0 || above[i - 1];
        const bool right = i + 1 == n || above[i + 1];
        ok[i] = above[i] && left && right;
    }
    return ok;
}

double fisher_information(const DensityProfile& rho) {
    const auto lnr = log_of(clamped(rho, kDefaultFloor));
    const auto grad = first_derivative(lnr, rho.grid().spacing());
    std::vector<double> integrand(rho.size());
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = rho[i] * grad[i] * grad[i];
    return rho.grid().integrate(integrand);
}

double fisher_information_curvature_form(const DensityProfile& rho, double floor) {
    return -expectation(rho, log_curvature(rho, floor));
}

double shannon_information(const DensityProfile& rho) {
    std::vector<double> integrand(rho.size());
    for (std::size_t i = 0; i < integrand.size(); ++i)
        integrand[i] = rho[i] > 0.0 ? -rho[i] * std::log(rho[i]) : 0.0;
    return rho.grid().integrate(integrand);
}

FieldOnGrid bohm_potential(const DensityProfile& rho, const PhysicalParams& params, double floor) {
    auto amp = clamped(rho, floor);
    for (double& e : amp) e = std::sqrt(e);
    const auto lap = second_derivative(amp, rho.grid().spacing());
    const double c = -params.hbar * params.hbar / (2.0 * params.m);
    FieldOnGrid q{rho.grid(), std::vector<double>(rho.size())};
    for (std::size_t i = 0; i < q.size(); ++i) q.values[i] = c * lap[i] / amp[i];
    return q;
}

FieldOnGrid quantum_temperature(const DensityProfile& rho, const PhysicalParams& params, double floor) {
    auto field = log_curvature(rho, floor);
    const double c = -(params.hbar * params.hbar / (4.0 * params.m));
    for (double& e : field.values) e = c * e;
    return field;
}

double expectation(const DensityProfile& rho, const FieldOnGrid& field) {
    if (field.size() != rho.size()) throw DomainError("expectation: size mismatch");
    std::vector<double> integrand(rho.size());
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = rho[i] * field[i];
    return rho.grid().integrate(integrand);
}

}  // namespace qfp::functionals

#include "qfp/dispersion.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qfp/errors.hpp"

namespace qfp::dispersion {

namespace {

void require_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be finite and >= 0");
}

// u - ln(1+u), series below 1e-3 where the subtraction cancels.
double g(double u) {
    if (std::abs(u) < 1e-3) {
        const double u2 = u * u;
        return u2 * (0.5 - u / 3.0 + u2 / 4.0 - u2 * u / 5.0 + u2 * u2 / 6.0);
    }
    return u - std::log1p(u);
}

constexpr std::array<const char*, 7> kNames = {"classical", "eq9",         "improved",   "eq13",
                                               "lambert",   "short-third", "short-exact"};

}  // namespace

double classical(const PhysicalParams& p, double t) {
    require_time(t, "classical");
    return 2.0 * p.D * t;
}

double semiclassical(const PhysicalParams& p, double t) {
    require_time(t, "eq9");
    if (p.lambdaT == 0.0) return 2.0 * p.D * t;
    const double l2 = p.lambdaT * p.lambdaT;
    const double bound = p.semiclassical_threshold();
    if (t <= bound) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "eq9: applicable for large times only, need t > lambdaT^2/(2D) = " << bound << ", got t = " << t;
        throw DomainError(msg.str());
    }
    return 2.0 * p.D * t + l2 * std::log(6.0 * p.D * t / l2) / 3.0;
}

double improved(const PhysicalParams& p, double t) {
    require_time(t, "improved");
    if (p.lambdaT == 0.0) return 2.0 * p.D * t;
    const double l2 = p.lambdaT * p.lambdaT;
    return 2.0 * p.D * t + l2 * std::log1p(6.0 * p.D * t / l2) / 3.0;
}

double implicit_lhs(const PhysicalParams& p, double sigma2) {
    if (p.lambdaT == 0.0) return sigma2;
    const double l2 = p.lambdaT * p.lambdaT;
    return l2 / 3.0 * g(3.0 * sigma2 / l2);
}

double solve_implicit(const PhysicalParams& p, double t, double tol) {
    require_time(t, "eq13");
    if (!(tol > 0.0)) throw DomainError("eq13: tol must be positive");
    const double target = 2.0 * p.D * t;
    if (t == 0.0) return 0.0;
    if (p.lambdaT == 0.0) return target;

    // Work in u = 3 sigma^2 / lambda^2, where the equation reads g(u) = r.
    const double l2 = p.lambdaT * p.lambdaT;
    const double scale = l2 / 3.0;
    const double r = target / scale;

    double lo = 0.0;
    double hi = std::max(1.0, r + 2.0 * std::log1p(r) + 2.0);
    while (g(hi) < r) hi *= 2.0;  // g(u) ~ u, terminates quickly
    double u = r < 1.0 ? std::sqrt(2.0 * r) : r + std::log1p(r);
    if (!(u > lo && u < hi)) u = 0.5 * (lo + hi);

    double best = u;
    double bestRes = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double f = g(u) - r;
        const double res = std::abs(scale * f);
        if (res < bestRes) {
            bestRes = res;
            best = u;
        }
        if (res < tol) break;
        if (f > 0.0) hi = u; else lo = u;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        const double dg = u / (1.0 + u);
        double next = dg > 0.0 ? u - f / dg : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        u = next;
    }
    if (!std::isfinite(best)) throw NumericalError("eq13: root search produced a non-finite value");
    return scale * best;
}

double short_time(const PhysicalParams& p, double t, ShortTime kind) {
    require_time(t, "short-time");
    const double denom = kind == ShortTime::Third ? 3.0 * p.m * p.b : p.m * p.b;
    return p.hbar * std::sqrt(t / denom);
}

double lambert_w_minus1_log(double L) {
    if (!(L <= -1.0) || std::isnan(L)) throw DomainError("lambert_w_minus1: ln(-z) must be <= -1");
    if (L == -1.0) return -1.0;
    // Solve h(w) = w + ln(-w) - L = 0 on w <= -1.
    double w;
    const double e1 = std::expm1(L + 1.0);  // e z + 1 - 1, in (-1, 0)
    if (e1 > -0.25) {
        const double q = -std::sqrt(-2.0 * e1);
        w = -1.0 + q * (1.0 + q * (-1.0 / 3.0 + q * (11.0 / 72.0 + q * (-43.0 / 540.0 + q * 769.0 / 17280.0))));
    } else {
        w = L - std::log(-L);
    }
    for (int it = 0; it < 60; ++it) {
        const double h = w + std::log(-w) - L;
        const double d1 = 1.0 + 1.0 / w;
        const double d2 = -1.0 / (w * w);
        const double denom = 2.0 * d1 * d1 - h * d2;
        if (denom == 0.0) break;
        double next = w - 2.0 * h * d1 / denom;
        if (next > -1.0) next = 0.5 * (w - 1.0);  // stay on the branch
        const double dw = next - w;
        w = next;
        if (std::abs(dw) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) break;
    }
    return w;
}

double lambert_w_minus1(double z) {
    const double branch = -std::exp(-1.0);
    if (std::isnan(z) || z < branch || z >= 0.0)
        throw DomainError("lambert_w_minus1: z must lie in [-1/e, 0)");
    if (z == branch) return -1.0;
    return lambert_w_minus1_log(std::log(-z));
}

double lambert_u(double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("lambert_u: s must be finite and >= 0");
    if (s == 0.0) return 0.0;
    return -1.0 - lambert_w_minus1_log(-1.0 - s);
}

double lambert_approx(const PhysicalParams& p, double t) {
    require_time(t, "lambert");
    if (p.lambdaT == 0.0) return 2.0 * p.D * t;
    const double l2 = p.lambdaT * p.lambdaT;
    return l2 * lambert_u(2.0 * p.D * t / l2);
}

DispersionLaw DispersionLaw::parse(std::string_view name, const PhysicalParams& params) {
    for (std::size_t k = 0; k < kNames.size(); ++k)
        if (name == kNames[k]) return {static_cast<Kind>(k), params};
    std::string known;
    for (const char* n : kNames) known += std::string(known.empty() ? "" : ", ") + n;
    throw DomainError("unknown dispersion law '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<std::string> DispersionLaw::names() { return {kNames.begin(), kNames.end()}; }

std::string DispersionLaw::name() const { return kNames[static_cast<std::size_t>(kind_)]; }

double DispersionLaw::min_time() const noexcept {
    return kind_ == Kind::Semiclassical ? params_.semiclassical_threshold() : 0.0;
}

double DispersionLaw::operator()(double t) const {
    switch (kind_) {
        case Kind::Classical: return classical(params_, t);
        case Kind::Semiclassical: return semiclassical(params_, t);
        case Kind::Improved: return improved(params_, t);
        case Kind::Implicit: return solve_implicit(params_, t);
        case Kind::Lambert: return lambert_approx(params_, t);
        case Kind::ShortTimeThird: return short_time(params_, t, ShortTime::Third);
        case Kind::ShortTimeExact: return short_time(params_, t, ShortTime::Exact);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace qfp::dispersion

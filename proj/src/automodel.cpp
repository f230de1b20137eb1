#include "qfp/automodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qfp/dispersion.hpp"
#include "qfp/errors.hpp"

namespace qfp::automodel {

namespace {

constexpr double kCollapse = 1e-12;
constexpr double kBlowUp = 1e150;

void rhs(double x, std::span<const double> s, std::span<double> d) {
    const double y = s[0], yp = s[1];
    // (y^2 - 1)/x^2 written as a product so the constant solution stays exact
    d[0] = yp;
    d[1] = (yp * yp + (y - 1.0) * (y + 1.0) / (x * x) - 4.0 * yp) / y;
}

void check_settings(const Settings& st) {
    if (!(st.x0 > 0.0 && st.x0 <= 0.01)) throw DomainError("automodel: x0 must lie in (0, 0.01]");
    if (!(st.xMax >= 10.0) || !std::isfinite(st.xMax)) throw DomainError("automodel: xMax must be >= 10");
    if (st.meshIntervals < 16) throw DomainError("automodel: meshIntervals must be >= 16");
}

enum class Outcome { Completed, Collapsed, BlewUp };

struct Trial {
    Outcome outcome;
    double objective;  // y'(xMax) - 2 when completed
};

Trial trial(double c2, const Settings& st) {
    const auto s0 = series_start(c2, st.x0);
    std::vector<double> y{s0.y, s0.yPrime};
    double x = st.x0;
    ode::DormandPrince dp(rhs, 2, st.ode);
    Outcome out = Outcome::Completed;
    auto guard = [&](double, std::span<const double> s) {
        if (!(s[0] > kCollapse)) out = Outcome::Collapsed;
        else if (!(std::abs(s[0]) < kBlowUp) || !(std::abs(s[1]) < kBlowUp)) out = Outcome::BlewUp;
        return out == Outcome::Completed;
    };
    try {
        dp.advance(x, y, st.xMax, guard);
    } catch (const StiffnessError&) {
        // runaway trajectories end in step underflow before tripping the guard
        if (!(y[0] > 1.0)) throw;
        out = Outcome::BlewUp;
    }
    return {out, out == Outcome::Completed ? y[1] - 2.0 : 0.0};
}

// Signed ordering used by the bisection: collapse counts as below, blow-up as above.
double rank(const Trial& t) {
    switch (t.outcome) {
        case Outcome::Collapsed: return -std::numeric_limits<double>::infinity();
        case Outcome::BlewUp: return std::numeric_limits<double>::infinity();
        default: return t.objective;
    }
}

}  // namespace

double residual(double x, double y, double yP, double yPP) {
    if (!(x > 0.0)) throw DomainError("automodel residual: x must be > 0");
    return y * yPP - yP * yP - y * y / (x * x) + 4.0 * yP + 1.0 / (x * x);
}

SeriesValue series_start(double c2, double x0) {
    if (!(x0 > 0.0 && x0 <= 0.1)) throw DomainError("series_start: x0 must lie in (0, 0.1]");
    return {1.0 + c2 * x0 * x0 - 2.0 * c2 * x0 * x0 * x0, 2.0 * c2 * x0 - 6.0 * c2 * x0 * x0};
}

Solution integrate_from(double c2, const Settings& st) {
    check_settings(st);
    const std::size_t N = st.meshIntervals;
    Solution sol;
    sol.c2 = c2;
    sol.x.reserve(N + 1);
    sol.y.reserve(N + 1);
    sol.yPrime.reserve(N + 1);

    const auto s0 = series_start(c2, st.x0);
    std::vector<double> y{s0.y, s0.yPrime};
    double x = st.x0;
    sol.x.push_back(x);
    sol.y.push_back(y[0]);
    sol.yPrime.push_back(y[1]);

    ode::DormandPrince dp(rhs, 2, st.ode);
    const auto guard = [](double, std::span<const double> s) {
        return s[0] > kCollapse && std::abs(s[0]) < kBlowUp && std::abs(s[1]) < kBlowUp;
    };
    for (std::size_t k = 1; k <= N; ++k) {
        const double r = static_cast<double>(k) / static_cast<double>(N);
        const double xk = k == N ? st.xMax : st.x0 + (st.xMax - st.x0) * r * r;
        if (dp.advance(x, y, xk, guard) == ode::Status::Stopped) {
            std::ostringstream msg;
            msg << "automodel: trajectory left the admissible region at x = " << x << " (y = " << y[0]
                << ") for c2 = " << c2;
            throw ShootingError(msg.str());
        }
        sol.x.push_back(xk);
        sol.y.push_back(y[0]);
        sol.yPrime.push_back(y[1]);
    }
    return sol;
}

ShotResult shoot(const Settings& st) {
    check_settings(st);
    ShotDiagnostics diag;
    double lo = 0.0, hi = 64.0;
    Trial tLo = trial(lo, st);
    Trial tHi = trial(hi, st);
    diag.evaluations = 2;
    while (!(rank(tHi) > 0.0)) {
        if (hi > 1e6) throw DomainError("automodel: no bracket for c2 up to 1e6");
        lo = hi;
        tLo = tHi;
        hi *= 2.0;
        tHi = trial(hi, st);
        ++diag.evaluations;
    }
    if (!(rank(tLo) < 0.0)) {
        std::ostringstream msg;
        msg << "automodel: objective at c2 = " << lo << " is " << rank(tLo) << ", expected < 0";
        throw ShootingError(msg.str());
    }

    double best = std::numeric_limits<double>::quiet_NaN();
    double bestObj = std::numeric_limits<double>::infinity();
    auto consider = [&](double c, const Trial& t) {
        if (t.outcome == Outcome::Completed && std::abs(t.objective) < std::abs(bestObj)) {
            best = c;
            bestObj = t.objective;
        }
    };
    consider(lo, tLo);
    consider(hi, tHi);

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const Trial t = trial(mid, st);
        ++diag.evaluations;
        const double r = rank(t);
        // monotone in c2: the midpoint must fall between the bracket ends
        const double slack = 1e-6 * (1.0 + std::abs(r));
        if (r < rank(tLo) - slack || r > rank(tHi) + slack) {
            std::ostringstream msg;
            msg << "automodel: y'(xMax) not monotone in c2 near " << mid << " (objective " << r << ")";
            throw ShootingError(msg.str());
        }
        consider(mid, t);
        if (r > 0.0) {
            hi = mid;
            tHi = t;
        } else {
            lo = mid;
            tLo = t;
        }
        if (hi - lo <= 1e-13 * hi) break;
    }
    if (std::isnan(best)) throw ShootingError("automodel: no completed trajectory inside the bracket");

    ShotResult res{best, integrate_from(best, st), diag};
    res.diagnostics.objective = res.solution.yPrime.back() - 2.0;
    res.diagnostics.bracket = {lo, hi};
    return res;
}

SeriesValue Solution::at(double xq) const {
    if (!(xq > 0.0) || xq > x.back()) throw DomainError("automodel: evaluation point outside (0, xMax]");
    if (xq <= x.front()) {
        // series below the start node; the stored start is the same series
        return {1.0 + c2 * xq * xq - 2.0 * c2 * xq * xq * xq, 2.0 * c2 * xq - 6.0 * c2 * xq * xq};
    }
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t k = static_cast<std::size_t>(it - x.begin());
    if (k >= x.size()) k = x.size() - 1;
    const std::size_t j = k - 1;
    const double h = x[k] - x[j];
    const double t = (xq - x[j]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double yv = h00 * y[j] + h10 * h * yPrime[j] + h01 * y[k] + h11 * h * yPrime[k];
    // derivative of the cubic, corrected by the stored y' at the ends
    const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1, d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    const double ypv = d00 * y[j] + d10 * yPrime[j] + d01 * y[k] + d11 * yPrime[k];
    return {yv, ypv};
}

std::vector<double> Solution::second_derivative() const {
    const std::size_t n = x.size();
    std::vector<double> d(n);
    auto three_point = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t at) {
        // derivative at x[at] of the parabola through (x_a, x_b, x_c)
        const double xa = x[a], xb = x[b], xc = x[c], xo = x[at];
        const double la = ((xo - xb) + (xo - xc)) / ((xa - xb) * (xa - xc));
        const double lb = ((xo - xa) + (xo - xc)) / ((xb - xa) * (xb - xc));
        const double lc = ((xo - xa) + (xo - xb)) / ((xc - xa) * (xc - xb));
        return la * yPrime[a] + lb * yPrime[b] + lc * yPrime[c];
    };
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three_point(i - 1, i, i + 1, i);
    d[0] = three_point(0, 1, 2, 0);
    d[n - 1] = three_point(n - 3, n - 2, n - 1, n - 1);
    return d;
}

std::vector<double> Solution::scaled_residuals() const {
    const auto ypp = second_derivative();
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = std::abs(residual(x[i], y[i], yPrime[i], ypp[i])) / (1.0 + y[i] * y[i] / (x[i] * x[i]));
    return r;
}

Figure1 figure1_curves(const Solution& sol, double sMax, std::size_t nSamples) {
    if (!(sMax > 0.0) || !std::isfinite(sMax)) throw DomainError("figure1: sMax must be positive");
    if (nSamples < 16) throw DomainError("figure1: nSamples must be >= 16");
    const double xm = sol.x_max();
    if (sMax > 8.0 * xm * xm) {
        std::ostringstream msg;
        msg << "figure1: sMax = " << sMax << " exceeds 8 xMax^2 = " << 8.0 * xm * xm << "; extend xMax";
        throw DomainError(msg.str());
    }
    Figure1 f{DispersionCurve("numeric"), DispersionCurve("lambert"), DispersionCurve("classical")};
    for (std::size_t k = 0; k < nSamples; ++k) {
        const double r = static_cast<double>(k + 1) / static_cast<double>(nSamples);
        const double s = sMax * r * r;
        const double x = std::min(std::sqrt(s / 8.0), xm);
        f.numeric.append(s, 4.0 * x * sol.at(x).y);
        f.lambert.append(s, dispersion::lambert_u(s));
        f.classical.append(s, s);
    }
    return f;
}

double sigma2_at(const Solution& sol, const PhysicalParams& p, double t) {
    if (!(t > 0.0)) throw DomainError("automodel: t must be > 0");
    if (p.hbar == 0.0) throw DomainError("automodel: the self-similar variable needs hbar > 0");
    const double x = std::sqrt(p.D * t) / (2.0 * p.lambdaT);
    return p.hbar * std::sqrt(t / (p.m * p.b)) * sol.at(x).y;
}

}  // namespace qfp::automodel

#pragma once

// Reference computations for the tests. Nothing here calls into the library, so a
// bug in a solver cannot leak into the value it is checked against.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

// Plain bisection on a sign change; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-15) {
    double flo = f(lo);
    if (flo * f(hi) > 0.0) throw std::runtime_error("oracle::bisect: no sign change");
    for (int k = 0; k < 400 && hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi)); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Newton with a numerical derivative, for the regression anchors.
inline double newton(const std::function<double(double)>& f, double x, int iters = 100) {
    for (int k = 0; k < iters; ++k) {
        const double h = 1e-7 * (1.0 + std::abs(x));
        const double d = (f(x + h) - f(x - h)) / (2.0 * h);
        const double dx = f(x) / d;
        x -= dx;
        if (std::abs(dx) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Classical RK4 for a scalar ODE with a fixed number of steps.
inline double rk4(const std::function<double(double, double)>& f, double t0, double y0, double t1, int steps) {
    const double h = (t1 - t0) / steps;
    double t = t0, y = y0;
    for (int k = 0; k < steps; ++k) {
        const double k1 = f(t, y);
        const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = f(t + h, y + h * k3);
        y += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        t += h;
    }
    return y;
}

inline double gaussian(double x, double s2) {
    return std::exp(-0.5 * x * x / s2) / std::sqrt(2.0 * std::numbers::pi * s2);
}

// Dispersion law of the Gaussian closure by direct ODE integration:
// d sigma^2/dt = 2 (D + kappa / sigma^2).
inline double closure_sigma2(double D, double kappa, double t0, double s0, double t1, int steps = 20000) {
    return rk4([&](double, double s) { return 2.0 * (D + kappa / s); }, t0, s0, t1, steps);
}

}  // namespace oracle

#include "qfp/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfp/errors.hpp"

namespace qfp::ode {

namespace {

// Dormand-Prince tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

DormandPrince::DormandPrince(Rhs rhs, std::size_t dim, Options opts)
    : rhs_(std::move(rhs)), n_(dim), opts_(opts),
      k1_(dim), k2_(dim), k3_(dim), k4_(dim), k5_(dim), k6_(dim), k7_(dim), tmp_(dim), ynew_(dim) {
    if (!(opts_.rtol > 0.0) || !(opts_.atol > 0.0)) throw DomainError("ode: tolerances must be positive");
    h_ = opts_.hInitial;
}

double DormandPrince::initial_step(double x, const std::vector<double>& y, double span) {
    rhs_(x, y, k1_);
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sc = opts_.atol + opts_.rtol * std::abs(y[i]);
        d0 += (y[i] / sc) * (y[i] / sc);
        d1 += (k1_[i] / sc) * (k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / n_);
    d1 = std::sqrt(d1 / n_);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, span);
}

Status DormandPrince::advance(double& x, std::vector<double>& y, double xEnd, const Guard& guard) {
    if (y.size() != n_) throw DomainError("ode: state dimension mismatch");
    if (!(xEnd > x)) throw DomainError("ode: xEnd must exceed x");
    if (h_ <= 0.0) h_ = initial_step(x, y, xEnd - x);
    fsal_ = false;

    long steps = 0;
    while (x < xEnd) {
        if (++steps > opts_.maxSteps) throw StiffnessError("ode: step budget exhausted");
        bool last = false;
        double h = h_;
        const double hMin = opts_.hMinRelative * std::max(1.0, std::abs(x));
        // absorb slivers into this step rather than leave them for the next one
        if (x + h >= xEnd - hMin) {
            h = xEnd - x;
            last = true;
        }
        if (h < hMin && !last) {
            std::ostringstream msg;
            msg << "ode: step size underflow at x = " << x;
            throw StiffnessError(msg.str());
        }

        if (!fsal_) rhs_(x, y, k1_);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
        rhs_(x + c2 * h, tmp_, k2_);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        rhs_(x + c3 * h, tmp_, k3_);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        rhs_(x + c4 * h, tmp_, k4_);
        for (std::size_t i = 0; i < n_; ++i)
            tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        rhs_(x + c5 * h, tmp_, k5_);
        for (std::size_t i = 0; i < n_; ++i)
            tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
        const double xNew = last ? xEnd : x + h;
        rhs_(xNew, tmp_, k6_);
        for (std::size_t i = 0; i < n_; ++i)
            ynew_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
        rhs_(xNew, ynew_, k7_);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n_; ++i) {
            const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
            const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
            err += (e / sc) * (e / sc);
            finite = finite && std::isfinite(ynew_[i]) && std::isfinite(e);
        }
        err = finite ? std::sqrt(err / n_) : 1e10;

        if (err <= 1.0) {
            // PI controller (Hairer's defaults for this pair)
            double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(errPrev_, 0.4 / 5.0);
            if (err == 0.0) fac = 5.0;
            fac = std::clamp(fac, 0.2, 5.0);
            errPrev_ = std::max(err, 1e-4);
            x = xNew;
            y.swap(ynew_);
            k1_.swap(k7_);
            fsal_ = true;
            ++accepted_;
            // a clipped final step only informs h_ through its error, not its length
            if (!last) h_ = fac * h;
            else if (fac < 1.0) h_ *= fac;
            if (guard && !guard(x, y)) return Status::Stopped;
        } else {
            ++rejected_;
            h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
            fsal_ = true;  // k1_ still belongs to y
        }
    }
    return Status::Reached;
}

}  // namespace qfp::ode

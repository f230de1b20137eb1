#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "qfp/automodel.hpp"
#include "qfp/dispersion.hpp"
#include "qfp/errors.hpp"
#include "qfp/ode.hpp"
#include "qfp/params.hpp"

using namespace qfp;
namespace am = qfp::automodel;

namespace {

// one shot shared by the slower cases
const am::ShotResult& shot() {
    static const am::ShotResult r = am::shoot();
    return r;
}

}  // namespace

TEST_SUITE("automodel") {

TEST_CASE("residual as written") {
    for (double x : {0.1, 1.0, 7.0}) CHECK(am::residual(x, 1, 0, 0) == 0.0);
    for (double x : {1.0, 10.0, 100.0}) CHECK(am::residual(x, 2 * x, 2, 0) == doctest::Approx(1 / (x * x)));
    CHECK(am::residual(1, 1.01, 0, 0) != 0.0);
    CHECK_THROWS_AS((void)am::residual(0, 1, 0, 0), DomainError);
}

TEST_CASE("series start") {
    const auto s0 = am::series_start(0, 1e-3);
    CHECK(s0.y == 1.0);
    CHECK(s0.yPrime == 0.0);
    for (double c2 : {-10.0, 0.5, 4.0, 10.0}) {
        const double x = 1e-3;
        const auto s = am::series_start(c2, x);
        const double ypp = 2 * c2 - 12 * c2 * x;
        CHECK(std::abs(am::residual(x, s.y, s.yPrime, ypp)) < 100 * x);
        CHECK(std::abs(am::series_start(c2, 1e-8).yPrime) < 1e-6);
    }
    CHECK_THROWS_AS((void)am::series_start(1, 0.0), DomainError);
    CHECK_THROWS_AS((void)am::series_start(1, 0.2), DomainError);
}

TEST_CASE("local analysis: a linear term cannot survive") {
    // y = 1 + c1 x leaves -2 c1 / x at leading order
    const double c1 = 0.3;
    for (double x : {1e-3, 1e-4}) {
        const double r = am::residual(x, 1 + c1 * x, c1, 0);
        CHECK(std::abs(r * x / (-2 * c1) - 1) < 0.01);
    }
    // c3 = -2 c2 removes the O(x) term; any other c3 leaves it
    const double c2 = 1.7;
    auto res = [&](double c3, double x) {
        const double y = 1 + c2 * x * x + c3 * x * x * x;
        const double yp = 2 * c2 * x + 3 * c3 * x * x;
        const double ypp = 2 * c2 + 6 * c3 * x;
        return am::residual(x, y, yp, ypp);
    };
    CHECK(std::abs(res(-2 * c2, 1e-4)) < std::abs(res(-2 * c2 + 1, 1e-4)) / 100);
}

TEST_CASE("Dormand-Prince on a known solution") {
    ode::DormandPrince dp([](double, std::span<const double> y, std::span<double> d) { d[0] = -2 * y[0]; }, 1);
    double x = 0;
    std::vector<double> y{1.0};
    CHECK(dp.advance(x, y, 3.0) == ode::Status::Reached);
    CHECK(std::abs(y[0] - std::exp(-6.0)) < 1e-10);
}

TEST_CASE("c2 = 0 stays on the constant solution") {
    const auto sol = am::integrate_from(0.0);
    for (std::size_t k = 0; k < sol.x.size(); ++k) {
        CHECK(std::abs(sol.y[k] - 1) < 1e-12);
        CHECK(std::abs(sol.yPrime[k]) < 1e-12);
    }
}

TEST_CASE("large c2 overshoots, collapse is reported") {
    const auto big = am::integrate_from(64.0);
    CHECK(big.yPrime.back() > 2.0);
    CHECK_THROWS_AS((void)am::integrate_from(-50.0), ShootingError);
    CHECK(am::integrate_from(-5.0).yPrime.back() < 0.0);
}

TEST_CASE("objective is monotone in c2") {
    double prev = -1e300;
    for (double c2 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double v = am::integrate_from(c2).yPrime.back();
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("shooting converges") {
    const auto& r = shot();
    const auto& s = r.solution;
    CHECK(std::abs(s.yPrime.back() - 2) < 1e-3);
    CHECK(s.y.back() / s.x.back() > 1.9);
    CHECK(s.y.back() / s.x.back() < 2.1);
    CHECK(std::abs(s.y.front() - 1) < 10 * s.x.front() * s.x.front() * std::max(1.0, r.c2Star));
    for (std::size_t k = 1; k < s.y.size(); ++k) CHECK(s.y[k] > s.y[k - 1]);
    for (double e : s.scaled_residuals()) CHECK(e < 1e-6);
}

TEST_CASE("integral constraint of the converged solution") {
    // (y'/y)' = (y^2 - 1)/(x^2 y^2) - 4 y'/y^2 along any solution
    const auto& s = shot().solution;
    const double a = 0.05, b = s.x_max();
    const double lhs = s.at(b).yPrime / s.at(b).y - s.at(a).yPrime / s.at(a).y;
    const double rhs = oracle::simpson(
        [&](double x) {
            const auto v = s.at(x);
            return (v.y * v.y - 1) / (x * x * v.y * v.y) - 4 * v.yPrime / (v.y * v.y);
        },
        a, b, 40000);
    CHECK(std::abs(lhs - rhs) < 1e-6);
}

TEST_CASE("universal dispersion curves") {
    const auto& sol = shot().solution;
    const auto f = am::figure1_curves(sol, 100, 200);
    REQUIRE(f.numeric.size() == 200);
    for (std::size_t k = 0; k < 200; ++k) {
        CHECK(f.lambert[k].sigma2 - f.numeric[k].sigma2 >= -1e-6);
        CHECK(f.numeric[k].sigma2 >= f.classical[k].sigma2);
        CHECK(f.classical[k].sigma2 == f.classical[k].t);
    }
    const double s0 = f.numeric[0].t;
    CHECK(std::abs(f.numeric[0].sigma2 / std::sqrt(2 * s0) - 1) < 0.01);
    const auto n = f.numeric.size();
    const double slope = (f.numeric[n - 1].sigma2 - f.numeric[n - 2].sigma2) / (f.numeric[n - 1].t - f.numeric[n - 2].t);
    CHECK(slope > 0.98);
    CHECK(slope < 1.05);
    CHECK_THROWS_AS((void)am::figure1_curves(sol, 8 * 20 * 20 + 1, 20), DomainError);
}

TEST_CASE("coordinate map round trip") {
    const auto& sol = shot().solution;
    const auto p = derive_params(1.7, 0.6, 2.2, 0.9);
    const double lam2 = p.lambdaT * p.lambdaT;
    for (double t : {0.01, 0.3, 2.0}) {
        const double x = std::sqrt(p.D * t) / (2 * p.lambdaT);
        const double direct = p.hbar * std::sqrt(t / (p.m * p.b)) * sol.at(x).y;
        // universal coordinates: u = 4xy and s = 8x^2 = 2Dt/lambda^2
        CHECK(std::abs(8 * x * x - 2 * p.D * t / lam2) < 1e-12 * (2 * p.D * t / lam2));
        CHECK(std::abs(4 * x * sol.at(x).y * lam2 - direct) < 1e-12 * direct);
        CHECK(std::abs(am::sigma2_at(sol, p, t) - direct) < 1e-12 * direct);
    }
}

}  // TEST_SUITE

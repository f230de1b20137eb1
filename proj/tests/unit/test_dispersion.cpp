#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "qfp/dispersion.hpp"
#include "qfp/errors.hpp"
#include "qfp/params.hpp"

using namespace qfp;
namespace dl = qfp::dispersion;

namespace {

// D = 1, lambda = 1: m = b = kT = 1 and hbar = 2
PhysicalParams unit_lambda() { return derive_params(1, 1, 1, 2); }

double lhs_oracle(double s2, double lam) {
    return s2 - lam * lam * std::log(1 + 3 * s2 / (lam * lam)) / 3;
}

}  // namespace

TEST_SUITE("dispersion") {

TEST_CASE("classical law") {
    const auto p = derive_params(1, 1, 1, 0);
    CHECK(dl::classical(p, 0) == 0.0);
    CHECK(dl::classical(p, 3) == 6.0);
    CHECK(dl::classical(p, 2.5) == 2 * dl::classical(p, 1.25));
}

TEST_CASE("large-time semiclassical law") {
    const auto p = unit_lambda();
    CHECK(dl::semiclassical(p, 1) == doctest::Approx(2 + std::log(6.0) / 3).epsilon(1e-14));
    CHECK(dl::semiclassical(p, 10) == doctest::Approx(20 + std::log(60.0) / 3).epsilon(1e-14));
    CHECK(dl::semiclassical(p, 1) == doctest::Approx(2.5973).epsilon(1e-4));
    CHECK(dl::semiclassical(p, 10) == doctest::Approx(21.3648).epsilon(1e-5));
    try {
        (void)dl::semiclassical(p, 0.5);  // threshold lambda^2/2D = 0.5
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("applicable for large times") != std::string::npos);
    }
    const auto c = derive_params(1, 1, 1, 0);
    CHECK(dl::semiclassical(c, 0.3) == dl::classical(c, 0.3));
}

TEST_CASE("improved law") {
    const auto p = unit_lambda();
    CHECK(dl::improved(p, 0) == 0.0);
    for (double t : {1e-3, 0.1, 1.0, 50.0}) CHECK(dl::improved(p, t) > dl::classical(p, t));
    // 6Dt/lambda^2 > 1e3
    const double t = 200.0;
    CHECK(std::abs(dl::improved(p, t) - dl::semiclassical(p, t)) < 1e-3 * p.lambdaT * p.lambdaT);
    CHECK(std::abs(dl::improved(p, t) / dl::semiclassical(p, t) - 1) < 1e-3);
}

TEST_CASE("implicit law against bisection") {
    const auto p = unit_lambda();
    CHECK(dl::solve_implicit(p, 0) == 0.0);
    // 2Dt = 1
    const double ref = oracle::bisect([](double s) { return lhs_oracle(s, 1.0) - 1.0; }, 0.0, 10.0);
    CHECK(std::abs(dl::solve_implicit(p, 0.5) - ref) < 1e-10);
    CHECK(ref == doctest::Approx(1.582).epsilon(1e-3));
    for (double t = 1e-6; t < 1e4; t *= 7.3) {
        const double s = dl::solve_implicit(p, t);
        CHECK(std::abs(lhs_oracle(s, 1.0) - 2 * t) < 1e-10 * std::max(1.0, 2 * t));
        CHECK(std::abs(dl::implicit_lhs(p, s) - 2 * t) < 1e-12 * std::max(1.0, 2 * t));
        CHECK(s >= dl::classical(p, t));
    }
}

TEST_CASE("implicit law reduces to classical at hbar = 0") {
    const auto p = derive_params(1, 2, 3, 0);
    for (double t : {0.0, 0.1, 5.0}) CHECK(dl::solve_implicit(p, t) == dl::classical(p, t));
}

TEST_CASE("implicit law approaches the pure quantum limit") {
    const auto p = derive_params(1.3, 0.8, 1.1, 0.7);
    const double scale = p.m * p.b / (p.hbar * p.hbar) * std::pow(p.lambdaT, 4);
    for (double t : {1e-8 * scale, 1e-10 * scale}) {
        const double r = dl::solve_implicit(p, t) / dl::short_time(p, t, dl::ShortTime::Third);
        CHECK(r > 0.999);
        CHECK(r < 1.001);
    }
}

TEST_CASE("short-time laws") {
    const auto p = derive_params(1, 1, 1, 1);
    CHECK(dl::short_time(p, 3, dl::ShortTime::Third) == doctest::Approx(1.0));
    CHECK(dl::short_time(p, 1, dl::ShortTime::Exact) == doctest::Approx(1.0));
    for (double t : {0.01, 2.0})
        CHECK(dl::short_time(p, t, dl::ShortTime::Exact) / dl::short_time(p, t, dl::ShortTime::Third) ==
              doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("Lambert W-1") {
    CHECK(dl::lambert_w_minus1(-std::exp(-1.0)) == -1.0);
    const double ref = oracle::newton([](double w) { return w * std::exp(w) + 0.1; }, -3.5);
    CHECK(std::abs(ref * std::exp(ref) + 0.1) < 1e-14);
    CHECK(std::abs(dl::lambert_w_minus1(-0.1) - ref) < 1e-12);
    CHECK(ref == doctest::Approx(-3.577152).epsilon(1e-6));
    CHECK_THROWS_AS((void)dl::lambert_w_minus1(0.0), DomainError);
    CHECK_THROWS_AS((void)dl::lambert_w_minus1(-0.5), DomainError);
    CHECK_THROWS_AS((void)dl::lambert_w_minus1(0.1), DomainError);
    const double lo = -std::exp(-1.0), hi = -1e-8;
    for (int k = 0; k < 20; ++k) {
        // log-spaced distance from the origin, 20 points strictly inside the domain
        const double z = -std::exp(std::log(-hi) + (std::log(-lo) - std::log(-hi)) * (k + 0.5) / 20.0);
        const double w = dl::lambert_w_minus1(z);
        CHECK(w <= -1.0);
        CHECK(std::abs(w * std::exp(w) - z) < 1e-12 * std::abs(z));
    }
}

TEST_CASE("Lambert route and bisection agree") {
    for (double s = 0; s <= 1000; s = s < 1e-3 ? s + 1e-4 : s * 1.7) {
        const double u = dl::lambert_u(s);
        const double ref =
            s == 0 ? 0.0 : oracle::bisect([&](double v) { return v - std::log1p(v) - s; }, 0.0, s + 2 * std::sqrt(s) + 10);
        CHECK(std::abs(u - ref) < 1e-9 * std::max(1.0, ref));
        CHECK(std::abs(u - std::log1p(u) - s) < 1e-10 * std::max(1.0, s));
    }
    CHECK(dl::lambert_u(1.0) == doctest::Approx(2.146).epsilon(1e-3));
    const double s = 1e3;
    const double u = dl::lambert_u(s);
    CHECK(std::abs(u / (s + std::log(s)) - 1) < 0.01);
}

TEST_CASE("Lambert approximation in physical units") {
    const auto p = derive_params(1, 2, 0.5, 0.3);
    CHECK(dl::lambert_approx(p, 0) == 0.0);
    const double t = 0.7;
    const double lam2 = p.lambdaT * p.lambdaT;
    const double u = dl::lambert_approx(p, t) / lam2;
    CHECK(std::abs(u - std::log1p(u) - 2 * p.D * t / lam2) < 1e-10);
    CHECK(dl::lambert_approx(derive_params(1, 1, 1, 0), 2.0) == 4.0);
}

TEST_CASE("laws are ordered and nondecreasing") {
    const auto p = derive_params(1, 1, 1, 0.8);
    double prev[3] = {0, 0, 0};
    for (double t = 1e-4; t < 100; t *= 1.5) {
        const double c = dl::classical(p, t), i = dl::improved(p, t), e = dl::solve_implicit(p, t);
        CHECK(c < i);
        CHECK(e >= c);
        CHECK(c >= prev[0]);
        CHECK(i >= prev[1]);
        CHECK(e >= prev[2]);
        prev[0] = c;
        prev[1] = i;
        prev[2] = e;
    }
}

TEST_CASE("named laws") {
    const auto p = derive_params(1, 1, 1, 1);
    for (const auto& n : dl::DispersionLaw::names()) CHECK(dl::DispersionLaw::parse(n, p).name() == n);
    CHECK_THROWS_AS((void)dl::DispersionLaw::parse("nope", p), DomainError);
    const auto eq13 = dl::DispersionLaw::parse("eq13", p);
    CHECK(eq13(0.3) == dl::solve_implicit(p, 0.3));
    const auto eq9 = dl::DispersionLaw::parse("eq9", p);
    CHECK(eq9.min_time() == doctest::Approx(p.semiclassical_threshold()));
    CHECK_THROWS_AS((void)eq9(0.01), DomainError);
}

}  // TEST_SUITE

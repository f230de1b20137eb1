#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "qfp/dispersion.hpp"
#include "qfp/errors.hpp"
#include "qfp/functionals.hpp"
#include "qfp/params.hpp"
#include "qfp/reference_density.hpp"
#include "qfp/smoluchowski.hpp"

using namespace qfp;
namespace sm = qfp::smoluchowski;

namespace {

double kappa(const PhysicalParams& p) { return p.hbar * p.hbar / (12 * p.m * p.b); }

UniformGrid sized(double s2final, std::size_t n) { return UniformGrid::symmetric(6.5 * std::sqrt(s2final), n); }

}  // namespace

TEST_SUITE("smoluchowski") {

TEST_CASE("variant names") {
    using V = sm::Model::Variant;
    CHECK(sm::Model::parse_variant("classical") == V::Classical);
    CHECK(sm::Model::parse_variant("eq5") == V::Reference);
    CHECK(sm::Model::parse_variant("eq7") == V::Semiclassical);
    CHECK(sm::Model::parse_variant("eq12") == V::Nonlinear);
    CHECK_THROWS_AS((void)sm::Model::parse_variant("eq99"), DomainError);
}

TEST_CASE("effective diffusivity") {
    const auto p = derive_params(1, 1, 1, 0.8);
    const double t = 0.5;
    const auto g = UniformGrid::symmetric(6 * std::sqrt(2 * p.D * t), 201);
    const auto rho = DensityProfile::gaussian(g, 0, 2 * p.D * t);

    const auto eq5 = sm::effective_diffusivity(sm::Model::with_reference(ReferenceDensity::free_particle(p)), rho, t);
    const double eq7 = p.D * (1 + p.lambdaT * p.lambdaT / (6 * p.D * t));
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(std::abs(eq5[i] / eq7 - 1) < 0.02);
    const auto e7 = sm::effective_diffusivity(sm::Model::semiclassical(p), rho, t);
    for (double v : e7.values) CHECK(v == doctest::Approx(eq7).epsilon(1e-14));

    const double s2 = 0.3;
    const auto r2 = DensityProfile::gaussian(g, 0, s2);
    const auto e12 = sm::effective_diffusivity(sm::Model::nonlinear(p), r2, t);
    const double want = p.D + kappa(p) / s2;
    const auto ok = functionals::resolved_nodes(r2);
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
        if (ok[i]) CHECK(std::abs(e12[i] / want - 1) < 0.02);

    const auto c = derive_params(1, 1, 1, 0);
    for (const auto& m : {sm::Model::classical(c), sm::Model::semiclassical(c), sm::Model::nonlinear(c),
                          sm::Model::with_reference(ReferenceDensity::free_particle(c))})
        for (double v : sm::effective_diffusivity(m, r2, t).values) CHECK(v == c.D);
}

TEST_CASE("eq7 refuses times before the large-time threshold") {
    const auto p = derive_params(1, 1, 1, 1);
    const auto g = UniformGrid::symmetric(5, 101);
    const auto rho = DensityProfile::gaussian(g, 0, 0.5);
    CHECK_THROWS_AS((void)sm::run(sm::Model::semiclassical(p), rho, 0.1, 0.2, 1), DomainError);
}

TEST_CASE("steps conserve mass and respect the bound") {
    const auto p = derive_params(1, 1, 1, 0.5);
    const auto g = UniformGrid::symmetric(3, 121);
    const auto rho = DensityProfile::gaussian(g, 0.2, 0.3);
    for (const auto& m : {sm::Model::classical(p), sm::Model::nonlinear(p), sm::Model::semiclassical(p)}) {
        const double t = 0.2;
        const double dt = sm::stable_dt(m, rho, t);
        std::vector<double> before(rho.values().begin(), rho.values().end());
        const auto next = sm::step(m, rho, t, dt);
        double mass = 0;
        for (std::size_t i = 0; i < g.size(); ++i) mass += g.weight(i) * next[i];
        CHECK(std::abs(mass - 1) < 1e-14);
        CHECK_THROWS_AS((void)sm::step(m, rho, t, 1.5 * dt), InstabilityError);
    }
}

TEST_CASE("classical spreading") {
    const auto p = derive_params(1, 2, 1, 0);  // D = 0.5
    const double s0 = 0.2, T = 0.6;
    const auto g = sized(s0 + 2 * p.D * T, 161);
    const auto r = sm::run(sm::Model::classical(p), DensityProfile::gaussian(g, 0, s0), 0, T, 3);
    const double grown = r.dispersion.back().sigma2 - s0;
    CHECK(std::abs(grown / (2 * p.D * T) - 1) < 0.01);
    for (double m : r.mass) CHECK(std::abs(m - 1) < 1e-8);
}

TEST_CASE("hbar = 0 nonlinear run equals the classical run bitwise") {
    const auto p = derive_params(1, 1, 1, 0);
    const auto g = UniformGrid::symmetric(4, 81);
    const auto rho = DensityProfile::gaussian(g, 0, 0.1);
    const auto a = sm::run(sm::Model::classical(p), rho, 0, 0.1, 2);
    const auto b = sm::run(sm::Model::nonlinear(p), rho, 0, 0.1, 2);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a.finalDensity[i] == b.finalDensity[i]);
}

TEST_CASE("run refuses a grid too narrow for the predicted spread") {
    const auto p = derive_params(1, 1, 1, 0);
    const auto g = UniformGrid::symmetric(1, 81);
    CHECK_THROWS_AS((void)sm::run(sm::Model::classical(p), DensityProfile::gaussian(g, 0, 0.01), 0, 1, 1), DomainError);
}

TEST_CASE("eq7 follows the quadrature of its dispersion equation") {
    const auto p = derive_params(1, 1, 1, 1);  // lambda = 0.5, threshold 0.125
    const double t0 = 0.2, t1 = 2.0;
    const double s0 = 2 * p.D * t0;
    const auto g = sized(s0 + 2 * p.D * (t1 - t0) + 1, 161);
    const auto r = sm::run(sm::Model::semiclassical(p), DensityProfile::gaussian(g, 0, s0), t0, t1, 6);
    for (const auto& s : r.dispersion.samples()) {
        if (s.t == t0) continue;
        // d sigma^2/dt = 2D (1 + lambda^2/6Dt), integrated by Simpson
        const double want = oracle::simpson(
            [&](double t) { return 2 * p.D * (1 + p.lambdaT * p.lambdaT / (6 * p.D * t)); }, t0, s.t, 2000);
        const double closed = 2 * p.D * (s.t - t0) + p.lambdaT * p.lambdaT / 3 * std::log(s.t / t0);
        CHECK(std::abs(want / closed - 1) < 1e-9);
        CHECK(std::abs((s.sigma2 - s0) / want - 1) < 0.02);
    }
}

TEST_CASE("eq5 with the free reference matches eq7") {
    const auto p = derive_params(1, 1, 1, 1);
    const double t0 = 0.2, t1 = 1.2;
    const double s0 = 2 * p.D * t0;
    const auto g = sized(s0 + 2 * p.D * (t1 - t0) + 1, 161);
    const auto rho = DensityProfile::gaussian(g, 0, s0);
    const auto a = sm::run(sm::Model::with_reference(ReferenceDensity::free_particle(p)), rho, t0, t1, 4);
    const auto b = sm::run(sm::Model::semiclassical(p), rho, t0, t1, 4);
    for (std::size_t k = 0; k < a.dispersion.size(); ++k)
        CHECK(std::abs(a.dispersion[k].sigma2 / b.dispersion[k].sigma2 - 1) < 0.03);
}

TEST_CASE("eq12 closes on the Gaussian dispersion law") {
    const auto p = derive_params(1, 1, 1, 1);
    const double t0 = 0.01, t1 = 0.1;
    const double s0 = dispersion::solve_implicit(p, t0);
    const double sEnd = oracle::closure_sigma2(p.D, kappa(p), t0, s0, t1);
    const auto g = sized(sEnd, 121);
    const auto r = sm::run(sm::Model::nonlinear(p), DensityProfile::gaussian(g, 0, s0), t0, t1, 5);
    const auto c = sm::run(sm::Model::classical(p), DensityProfile::gaussian(g, 0, s0), t0, t1, 5);
    for (std::size_t k = 0; k < r.dispersion.size(); ++k) {
        const auto& s = r.dispersion[k];
        const double want = oracle::closure_sigma2(p.D, kappa(p), t0, s0, s.t);
        CHECK(std::abs(s.sigma2 / want - 1) < 0.02);
        CHECK(std::abs(want / dispersion::solve_implicit(p, s.t) - 1) < 1e-6);
        CHECK(std::abs(r.excessKurtosis[k]) < 0.02);
        CHECK(std::abs(r.mass[k] - 1) < 1e-8);
        CHECK(s.sigma2 >= c.dispersion[k].sigma2);
    }
}

TEST_CASE("eq12 error falls at second order under refinement") {
    const auto p = derive_params(1, 1, 1, 1);
    const double t0 = 0.02, t1 = 0.05;
    const double s0 = dispersion::solve_implicit(p, t0);
    const double want = oracle::closure_sigma2(p.D, kappa(p), t0, s0, t1);
    const double half = 6.5 * std::sqrt(want);
    auto err = [&](std::size_t n) {
        const auto g = UniformGrid::symmetric(half, n);
        const auto r = sm::run(sm::Model::nonlinear(p), DensityProfile::gaussian(g, 0, s0), t0, t1, 1);
        return std::abs(r.dispersion.back().sigma2 - want);
    };
    const double coarse = err(41), fine = err(81);
    CHECK(coarse / fine >= 3.0);
}

}  // TEST_SUITE

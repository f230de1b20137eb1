#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qfp/params.hpp"

namespace qfp::dispersion {

/// sigma^2 = 2 D t.
[[nodiscard]] double classical(const PhysicalParams& p, double t);

/// Large-time semiclassical law 2Dt + lambda^2 ln(6Dt/lambda^2)/3. Requires
/// t > lambda^2/(2D); returns 2Dt when lambda = 0.
[[nodiscard]] double semiclassical(const PhysicalParams& p, double t);

/// 2Dt + lambda^2 ln(1 + 6Dt/lambda^2)/3, valid for all t >= 0.
[[nodiscard]] double improved(const PhysicalParams& p, double t);

/// Left side of the implicit law, sigma^2 - (lambda^2/3) ln(1 + 3 sigma^2/lambda^2),
/// evaluated without cancellation for small sigma^2.
[[nodiscard]] double implicit_lhs(const PhysicalParams& p, double sigma2);

/// Root of implicit_lhs(sigma2) = 2Dt. Newton steps safeguarded by a bracket.
/// The residual is below tol unless it is already at the rounding level of 2Dt.
[[nodiscard]] double solve_implicit(const PhysicalParams& p, double t, double tol = 1e-12);

enum class ShortTime { Third, Exact };

/// hbar sqrt(t/3mb) (Third) or hbar sqrt(t/mb) (Exact).
[[nodiscard]] double short_time(const PhysicalParams& p, double t, ShortTime kind);

/// Lower real branch of the inverse of w e^w, z in [-1/e, 0).
[[nodiscard]] double lambert_w_minus1(double z);

/// Same branch, parametrized by L = ln(-z) <= -1 so that tiny |z| does not underflow.
[[nodiscard]] double lambert_w_minus1_log(double logMinusZ);

/// u >= 0 solving u - ln(1+u) = s, through u = -1 - W_{-1}(-exp(-1-s)).
[[nodiscard]] double lambert_u(double s);

/// lambda^2 * lambert_u(2Dt/lambda^2); 2Dt when lambda = 0.
[[nodiscard]] double lambert_approx(const PhysicalParams& p, double t);

/// One of the dispersion laws bound to a parameter set.
class DispersionLaw {
public:
    enum class Kind { Classical, Semiclassical, Improved, Implicit, Lambert, ShortTimeThird, ShortTimeExact };

    DispersionLaw(Kind kind, const PhysicalParams& params) : kind_(kind), params_(params) {}

    /// Accepts the names returned by name(); DomainError otherwise.
    static DispersionLaw parse(std::string_view name, const PhysicalParams& params);
    static std::vector<std::string> names();

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::string name() const;
    /// Smallest admissible time (exclusive for the semiclassical law).
    [[nodiscard]] double min_time() const noexcept;
    [[nodiscard]] const PhysicalParams& params() const noexcept { return params_; }

private:
    Kind kind_;
    PhysicalParams params_;
};

}  // namespace qfp::dispersion

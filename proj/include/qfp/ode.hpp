#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qfp::ode {

using Rhs = std::function<void(double x, std::span<const double> y, std::span<double> dydx)>;
/// Called after every accepted step; returning false stops the integration.
using Guard = std::function<bool(double x, std::span<const double> y)>;

struct Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double hInitial = 0.0;  // 0: pick from the local derivative
    double hMinRelative = 1e-14;
    long maxSteps = 10'000'000;
};

enum class Status { Reached, Stopped };

/// Dormand-Prince 5(4) with PI step control. The step size carries over between
/// advance() calls so integrating through a list of output points stays cheap.
class DormandPrince {
public:
    DormandPrince(Rhs rhs, std::size_t dim, Options opts = {});

    /// Integrates from x to xEnd (> x), updating both in place. Throws StiffnessError
    /// when the step size underflows or the step budget is exhausted.
    Status advance(double& x, std::vector<double>& y, double xEnd, const Guard& guard = {});

    [[nodiscard]] long accepted_steps() const noexcept { return accepted_; }
    [[nodiscard]] long rejected_steps() const noexcept { return rejected_; }

private:
    double initial_step(double x, const std::vector<double>& y, double span);

    Rhs rhs_;
    std::size_t n_;
    Options opts_;
    double h_ = 0.0;
    double errPrev_ = 1e-4;
    long accepted_ = 0;
    long rejected_ = 0;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
    bool fsal_ = false;
};

}  // namespace qfp::ode

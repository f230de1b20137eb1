#pragma once

#include <vector>

namespace qfp {

/// Polynomial potential V(x) = sum_k c_k x^k, degree at most 6. Derivatives are exact.
class Potential {
public:
    static constexpr int kMaxDegree = 6;

    Potential() = default;  // V = 0
    explicit Potential(std::vector<double> coeffs);

    /// V = m omega^2 x^2 / 2.
    static Potential harmonic(double m, double omega);

    [[nodiscard]] double value(double x) const noexcept { return eval(0, x); }
    [[nodiscard]] double d1(double x) const noexcept { return eval(1, x); }
    [[nodiscard]] double d2(double x) const noexcept { return eval(2, x); }
    [[nodiscard]] double d3(double x) const noexcept { return eval(3, x); }

    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] bool is_zero() const noexcept;

private:
    [[nodiscard]] double eval(int derivative, double x) const noexcept;

    std::vector<double> coeffs_;
};

}  // namespace qfp

#include "qfp/potential.hpp"

#include <algorithm>
#include <cmath>

#include "qfp/errors.hpp"

namespace qfp {

Potential::Potential(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (static_cast<int>(coeffs_.size()) > kMaxDegree + 1) {
        throw DomainError("Potential: degree above 6 is not supported");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw DomainError("Potential: non-finite coefficient");
    }
}

Potential Potential::harmonic(double m, double omega) {
    return Potential({0.0, 0.0, 0.5 * m * omega * omega});
}

bool Potential::is_zero() const noexcept { return coeffs_.empty(); }

double Potential::eval(int derivative, double x) const noexcept {
    // Horner on the coefficients of the derivative polynomial.
    const int n = static_cast<int>(coeffs_.size());
    double acc = 0.0;
    for (int k = n - 1; k >= derivative; --k) {
        double c = coeffs_[static_cast<std::size_t>(k)];
        for (int f = 0; f < derivative; ++f) c *= static_cast<double>(k - f);
        acc = acc * x + c;
    }
    return acc;
}

}  // namespace qfp

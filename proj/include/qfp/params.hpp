#pragma once

namespace qfp {

/// Physical constants of a Brownian particle and the scales derived from them.
/// Construct through derive_params(); the derived fields are never set independently.
struct PhysicalParams {
    double m = 1.0;     ///< mass
    double b = 1.0;     ///< friction coefficient
    double kT = 1.0;    ///< thermal energy k_B T
    double hbar = 0.0;  ///< reduced Planck constant; 0 is the classical limit

    double D = 1.0;        ///< Einstein diffusion constant kT/b
    double lambdaT = 0.0;  ///< thermal de Broglie wavelength hbar/(2 sqrt(m kT))
    double beta = 1.0;     ///< 1/kT

    /// Time below which the large-time semiclassical law does not apply: lambdaT^2/(2D).
    [[nodiscard]] double semiclassical_threshold() const noexcept;
    [[nodiscard]] bool is_classical() const noexcept { return hbar == 0.0; }
};

/// Throws DomainError naming the offending field when m, b or kT is not positive or hbar is negative.
[[nodiscard]] PhysicalParams derive_params(double m, double b, double kT, double hbar);

}  // namespace qfp

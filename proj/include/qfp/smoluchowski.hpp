#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfp/density.hpp"
#include "qfp/dispersion_curve.hpp"
#include "qfp/functionals.hpp"
#include "qfp/params.hpp"
#include "qfp/reference_density.hpp"

namespace qfp::smoluchowski {

/// Position-space model. Variants and their CLI names:
///   Classical      "classical"  D d2rho
///   Reference      "eq5"        d2[(D - kappa d2 ln rho_cl) rho], kappa = hbar^2/12mb
///   Semiclassical  "eq7"        D (1 + lambda^2/6Dt) d2rho
///   Nonlinear      "eq12"       d(D drho + rho dQ/3b), Q the Bohm potential of rho
class Model {
public:
    enum class Variant { Classical, Reference, Semiclassical, Nonlinear };

    static Model classical(const PhysicalParams& p) { return Model(Variant::Classical, p); }
    static Model with_reference(const ReferenceDensity& ref) {
        Model m(Variant::Reference, ref.params());
        m.reference_ = ref;
        return m;
    }
    static Model semiclassical(const PhysicalParams& p) { return Model(Variant::Semiclassical, p); }
    static Model nonlinear(const PhysicalParams& p, double floor = functionals::kDefaultFloor);

    static Variant parse_variant(std::string_view name);
    static std::string variant_name(Variant v);

    [[nodiscard]] Variant variant() const noexcept { return variant_; }
    [[nodiscard]] const PhysicalParams& params() const noexcept { return params_; }
    [[nodiscard]] double floor() const noexcept { return floor_; }
    [[nodiscard]] const ReferenceDensity& reference() const;
    /// hbar^2/(12 m b)
    [[nodiscard]] double kappa() const noexcept;
    /// Earliest admissible time (exclusive): lambda^2/2D for eq7, -offset for a free
    /// reference, -infinity otherwise.
    [[nodiscard]] double earliest_time() const;

private:
    Model(Variant v, const PhysicalParams& p) : variant_(v), params_(p) {}
    Variant variant_;
    PhysicalParams params_;
    double floor_ = functionals::kDefaultFloor;
    std::optional<ReferenceDensity> reference_;
};

/// Pointwise D_eff. Log-curvature corrections are applied on resolved nodes only;
/// elsewhere the classical D is reported. Throws InstabilityError if D_eff < 0.
[[nodiscard]] FieldOnGrid effective_diffusivity(const Model& model, const DensityProfile& rho, double t);

/// Largest admissible step: 0.4 / (Dmax/h^2 + 4 kappa/h^4 + vmax/2h). The last two
/// terms only enter for the nonlinear variant.
[[nodiscard]] double stable_dt(const Model& model, const DensityProfile& rho, double t);

/// One explicit conservative step from t to t + dt.
[[nodiscard]] DensityProfile step(const Model& model, const DensityProfile& rho, double t, double dt);

struct RunResult {
    DensityProfile finalDensity;
    DispersionCurve dispersion;          // (t, sigma^2) at each output
    std::vector<double> mean;
    std::vector<double> excessKurtosis;
    std::vector<double> mass;
    long steps = 0;
};

/// Marches from t0 to t1 with `outputs` equal output intervals; every interval is
/// split into equal steps below the stability bound. The initial state is the first
/// recorded sample. Refuses grids narrower than 8 predicted classical widths.
[[nodiscard]] RunResult run(const Model& model, const DensityProfile& rho0, double t0, double t1,
                            std::size_t outputs);

}  // namespace qfp::smoluchowski

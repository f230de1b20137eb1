#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfp/dispersion_curve.hpp"
#include "qfp/functionals.hpp"
#include "qfp/params.hpp"
#include "qfp/potential.hpp"
#include "qfp/reference_density.hpp"
#include "qfp/wigner.hpp"

namespace qfp::kramers {

enum class XBoundary { ZeroFlux, Periodic };

/// Phase-space model dW/dt = streaming + b d_p[(p/m) W + Theta(x) d_p W].
/// Theta by variant (CLI names in quotes):
///   Classical "classical"  kT
///   Coffey    "coffey"     kT + hbar^2 V''/(12 m kT)
///   LogRef    "logref"     kT - (hbar^2/12m) d2 ln rho_cl
///   Nonlinear "nonlinear"  kT - (hbar^2/12m) d2 ln rho, rho the current x-marginal
/// All but Classical carry the streaming term -(hbar^2/24) V''' d_p^3 W.
class KramersModel {
public:
    enum class Variant { Classical, Coffey, LogRef, Nonlinear };

    static KramersModel classical(const PhysicalParams& p, Potential v, PhaseGrid grid,
                                  XBoundary xb = XBoundary::ZeroFlux);
    /// DomainError when kT + hbar^2 V''/(12 m kT) <= 0 at any grid node.
    static KramersModel coffey(const PhysicalParams& p, Potential v, PhaseGrid grid,
                               XBoundary xb = XBoundary::ZeroFlux);
    static KramersModel logref(const PhysicalParams& p, Potential v, ReferenceDensity ref, PhaseGrid grid,
                               XBoundary xb = XBoundary::ZeroFlux);
    /// The curvature feeding Theta is averaged over a Gaussian window of width `smoothing`,
    /// weighted by rho. The unsmoothed equation amplifies short waves (wavelength near the
    /// mean free path); smoothing < 0 picks lambdaT/2.
    static KramersModel nonlinear(const PhysicalParams& p, Potential v, PhaseGrid grid,
                                  XBoundary xb = XBoundary::ZeroFlux, double floor = functionals::kDefaultFloor,
                                  double smoothing = -1.0);

    static Variant parse_variant(std::string_view name);
    static std::string variant_name(Variant v);

    [[nodiscard]] Variant variant() const noexcept { return variant_; }
    [[nodiscard]] const PhysicalParams& params() const noexcept { return params_; }
    [[nodiscard]] const Potential& potential() const noexcept { return potential_; }
    [[nodiscard]] const PhaseGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] XBoundary x_boundary() const noexcept { return xb_; }
    [[nodiscard]] double floor() const noexcept { return floor_; }
    [[nodiscard]] double smoothing() const noexcept { return smoothing_; }
    [[nodiscard]] const ReferenceDensity& reference() const;

private:
    KramersModel(Variant v, const PhysicalParams& p, Potential pot, PhaseGrid g, XBoundary xb)
        : variant_(v), params_(p), potential_(std::move(pot)), grid_(std::move(g)), xb_(xb) {}
    Variant variant_;
    PhysicalParams params_;
    Potential potential_;
    PhaseGrid grid_;
    XBoundary xb_;
    double floor_ = functionals::kDefaultFloor;
    double smoothing_ = 0.0;
    std::optional<ReferenceDensity> reference_;
};

/// A rate dW/dt on the phase grid (not normalized).
struct PhaseRate {
    PhaseGrid grid;
    std::vector<double> values;
};

/// Theta(x) for the state W at time t. Log curvature corrections apply on resolved
/// nodes only. InstabilityError naming the variant and x when Theta <= 0.
[[nodiscard]] FieldOnGrid effective_temperature(const KramersModel& model, const WignerField& w, double t = 0.0);

/// -(p/m) d_x W + V' d_p W - (hbar^2/24) V''' d_p^3 W in conservative flux form.
[[nodiscard]] PhaseRate streaming_apply(const KramersModel& model, const WignerField& w);

/// b d_p[(p/m) W + Theta d_p W]. For the nonlinear variant Theta comes from
/// rhoForNonlinear when given, otherwise from the marginal of w.
[[nodiscard]] PhaseRate collision_apply(const KramersModel& model, const WignerField& w,
                                        const DensityProfile* rhoForNonlinear = nullptr, double t = 0.0);

/// 0.4 min(h_x m/p_max, h_p/max|V'|, h_p^2/(2 b Theta_max), 24 h_p^3/(hbar^2 max|V'''|)).
[[nodiscard]] double stable_dt(const KramersModel& model, const WignerField& w, double t = 0.0);

/// Classical RK4 step. The nonlinear variant refreshes Theta at every stage.
[[nodiscard]] WignerField step(const KramersModel& model, const WignerField& w, double t, double dt);

/// |streaming + collision| / |collision of W p^2/(m kT)|, trapezoid-weighted L2 norms.
/// The perturbed field uses the Theta of w.
[[nodiscard]] double stationarity_residual(const KramersModel& model, const WignerField& w, double t = 0.0);

struct RunResult {
    WignerField finalField;
    DispersionCurve dispersionX;  // (t, sigma_x^2)
    std::vector<double> sigma2P;
    std::vector<double> meanX;
    std::vector<double> mass;
    long steps = 0;
    double dt = 0.0;  // last step size used
};

[[nodiscard]] RunResult run(const KramersModel& model, const WignerField& w0, double t0, double t1,
                            std::size_t outputs);

}  // namespace qfp::kramers

#include "qfp/smoluchowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qfp/errors.hpp"

namespace qfp::smoluchowski {

namespace {

constexpr double kSafety = 0.4;
constexpr double kNegativeClip = 1e-10;  // relative to max(rho)

// Bernoulli function z / (e^z - 1)
inline double bernoulli(double z) {
    if (std::abs(z) < 1e-6) return 1.0 - z * (0.5 - z / 12.0);
    return z / std::expm1(z);
}

std::string where(const SpatialGrid& g, std::size_t i) {
    std::ostringstream s;
    s << "x = " << g.node(i) << " (node " << i << ")";
    return s.str();
}

// Scratch state for repeated steps on one grid.
class Stepper {
public:
    Stepper(const Model& model, const SpatialGrid& grid)
        : model_(model), grid_(grid), n_(grid.size()), h_(grid.spacing()),
          deff_(n_), L_(n_), Q_(n_), flux_(n_ - 1), ok_(n_) {}

    // Fills the coefficients for the state rho at time t; returns the stable step.
    double prepare(const std::vector<double>& rho, double t) {
        const auto& p = model_.params();
        std::fill(deff_.begin(), deff_.end(), p.D);
        vmax_ = 0.0;
        kappaTerm_ = 0.0;
        const bool quantum = p.hbar != 0.0;
        switch (model_.variant()) {
            case Model::Variant::Classical: break;
            case Model::Variant::Semiclassical: {
                if (!(t > model_.earliest_time())) throw DomainError(too_early(t));
                const double l2 = p.lambdaT * p.lambdaT;
                std::fill(deff_.begin(), deff_.end(), p.D * (1.0 + l2 / (6.0 * p.D * t)));
                break;
            }
            case Model::Variant::Reference: {
                if (!quantum) break;
                if (!(t > model_.earliest_time())) throw DomainError(too_early(t));
                const auto ref = model_.reference().evaluate(grid_, t);
                const auto lc = functionals::log_curvature(ref, model_.floor());
                const auto res = functionals::resolved_nodes(ref, model_.floor());
                const double k = model_.kappa();
                for (std::size_t i = 0; i < n_; ++i)
                    if (res[i]) deff_[i] = p.D - k * lc[i];
                check_deff("eq5");
                break;
            }
            case Model::Variant::Nonlinear: {
                if (!quantum) break;
                bohm(rho);
                const double k = model_.kappa();
                // the flux form never uses D_eff; it only sizes the step here, so
                // a log-convex far tail is not an error (positivity is checked instead)
                for (std::size_t i = 0; i < n_; ++i)
                    if (ok_[i]) deff_[i] = std::max(p.D, p.D - k * d2L(i));
                kappaTerm_ = 4.0 * k / (h_ * h_ * h_ * h_);
                for (std::size_t i = 0; i + 1 < n_; ++i)
                    vmax_ = std::max(vmax_, std::abs((Q_[i + 1] - Q_[i]) / (3.0 * p.b * h_)));
                break;
            }
        }
        const double dmax = *std::max_element(deff_.begin(), deff_.end());
        return kSafety / (dmax / (h_ * h_) + kappaTerm_ + vmax_ / (2.0 * h_));
    }

    // rho <- rho + dt * div F, using coefficients from prepare().
    void apply(std::vector<double>& rho, double dt) {
        const auto& p = model_.params();
        if (model_.variant() == Model::Variant::Nonlinear && p.hbar != 0.0) {
            const double D = p.D;
            for (std::size_t i = 0; i + 1 < n_; ++i) {
                const double z = (Q_[i + 1] - Q_[i]) / (3.0 * p.b * D);  // v h / D
                // B(-z) = z + B(z); evaluate the accurate side
                double bz, bmz;
                if (z >= 0.0) {
                    bz = bernoulli(z);
                    bmz = z + bz;
                } else {
                    bmz = bernoulli(-z);
                    bz = bmz - z;
                }
                flux_[i] = (D * (bmz * rho[i + 1]) - D * (bz * rho[i])) / h_;
            }
        } else {
            for (std::size_t i = 0; i + 1 < n_; ++i)
                flux_[i] = (deff_[i + 1] * rho[i + 1] - deff_[i] * rho[i]) / h_;
        }
        // half cells at the walls keep the trapezoidal mass exact
        rho[0] += dt * flux_[0] / (0.5 * h_);
        for (std::size_t i = 1; i + 1 < n_; ++i) rho[i] += dt * (flux_[i] - flux_[i - 1]) / h_;
        rho[n_ - 1] -= dt * flux_[n_ - 2] / (0.5 * h_);

        double mx = 0.0;
        for (double v : rho) {
            if (!std::isfinite(v)) throw IntegrityError("smoluchowski: non-finite density");
            mx = std::max(mx, v);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (rho[i] < 0.0) {
                if (rho[i] < -kNegativeClip * mx)
                    throw IntegrityError("smoluchowski: negative density at " + where(grid_, i));
                rho[i] = 0.0;
            }
        }
    }

    [[nodiscard]] const std::vector<double>& deff() const { return deff_; }

private:
    // ln rho with the floor, mirrored across both walls
    double d2L(std::size_t i) const {
        const double inv = 1.0 / (h_ * h_);
        if (i == 0) return 2.0 * (L_[1] - L_[0]) * inv;
        if (i + 1 == n_) return 2.0 * (L_[n_ - 2] - L_[n_ - 1]) * inv;
        return (L_[i + 1] - 2.0 * L_[i] + L_[i - 1]) * inv;
    }
    double d1L(std::size_t i) const {
        if (i == 0 || i + 1 == n_) return 0.0;
        return (L_[i + 1] - L_[i - 1]) / (2.0 * h_);
    }

    void bohm(const std::vector<double>& rho) {
        const auto& p = model_.params();
        const double lo = model_.floor() * *std::max_element(rho.begin(), rho.end());
        for (std::size_t i = 0; i < n_; ++i) L_[i] = std::log(std::max(rho[i], lo));
        for (std::size_t i = 0; i < n_; ++i) {
            const bool self = rho[i] > lo;
            ok_[i] = self && (i == 0 || rho[i - 1] > lo) && (i + 1 == n_ || rho[i + 1] > lo);
        }
        const double c = -p.hbar * p.hbar / (2.0 * p.m);
        for (std::size_t i = 0; i < n_; ++i) {
            const double g = d1L(i);
            Q_[i] = c * (0.5 * d2L(i) + 0.25 * g * g);
        }
    }

    void check_deff(const char* label) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (!(deff_[i] >= 0.0)) {
                std::ostringstream msg;
                msg << label << ": negative effective diffusivity " << deff_[i] << " at " << where(grid_, i);
                throw InstabilityError(msg.str());
            }
        }
    }

    std::string too_early(double t) const {
        std::ostringstream msg;
        msg << Model::variant_name(model_.variant()) << ": time " << t << " must exceed " << model_.earliest_time();
        return msg.str();
    }

    const Model& model_;
    const SpatialGrid& grid_;
    std::size_t n_;
    double h_;
    std::vector<double> deff_, L_, Q_, flux_;
    std::vector<bool> ok_;
    double vmax_ = 0.0;
    double kappaTerm_ = 0.0;
};

// Coefficients of the explicitly time-dependent variants are taken at the midpoint.
bool midpoint_time(const Model& m) {
    return m.variant() == Model::Variant::Semiclassical || m.variant() == Model::Variant::Reference;
}

}  // namespace

Model Model::nonlinear(const PhysicalParams& p, double floor) {
    if (!(floor > 0.0) || floor > 1e-3) throw DomainError("smoluchowski: floor must lie in (0, 1e-3]");
    Model m(Variant::Nonlinear, p);
    m.floor_ = floor;
    return m;
}

Model::Variant Model::parse_variant(std::string_view name) {
    if (name == "classical") return Variant::Classical;
    if (name == "eq5") return Variant::Reference;
    if (name == "eq7") return Variant::Semiclassical;
    if (name == "eq12") return Variant::Nonlinear;
    throw DomainError("unknown smoluchowski variant '" + std::string(name) + "' (known: classical, eq5, eq7, eq12)");
}

std::string Model::variant_name(Variant v) {
    switch (v) {
        case Variant::Classical: return "classical";
        case Variant::Reference: return "eq5";
        case Variant::Semiclassical: return "eq7";
        case Variant::Nonlinear: return "eq12";
    }
    return "?";
}

const ReferenceDensity& Model::reference() const {
    if (!reference_) throw DomainError("smoluchowski: model has no reference density");
    return *reference_;
}

double Model::kappa() const noexcept { return params_.hbar * params_.hbar / (12.0 * params_.m * params_.b); }

double Model::earliest_time() const {
    if (variant_ == Variant::Semiclassical) return params_.semiclassical_threshold();
    if (variant_ == Variant::Reference && reference_->is_free_particle()) {
        return -reference_->time_offset();
    }
    return -std::numeric_limits<double>::infinity();
}

FieldOnGrid effective_diffusivity(const Model& model, const DensityProfile& rho, double t) {
    const auto& p = model.params();
    FieldOnGrid out{rho.grid(), std::vector<double>(rho.size(), p.D)};
    if (p.hbar == 0.0 && model.variant() != Model::Variant::Semiclassical) return out;
    const char* label = "";
    switch (model.variant()) {
        case Model::Variant::Classical: return out;
        case Model::Variant::Semiclassical: {
            if (!(t > model.earliest_time())) throw DomainError("eq7: time must exceed lambdaT^2/(2D)");
            const double l2 = p.lambdaT * p.lambdaT;
            std::fill(out.values.begin(), out.values.end(), p.D * (1.0 + l2 / (6.0 * p.D * t)));
            return out;
        }
        case Model::Variant::Reference: {
            label = "eq5";
            const auto ref = model.reference().evaluate(rho.grid(), t);
            const auto lc = functionals::log_curvature(ref, model.floor());
            const auto ok = functionals::resolved_nodes(ref, model.floor());
            for (std::size_t i = 0; i < out.size(); ++i)
                if (ok[i]) out.values[i] = p.D - model.kappa() * lc[i];
            break;
        }
        case Model::Variant::Nonlinear: {
            label = "eq12";
            const auto tq = functionals::quantum_temperature(rho, p, model.floor());
            const auto ok = functionals::resolved_nodes(rho, model.floor());
            for (std::size_t i = 0; i < out.size(); ++i)
                if (ok[i]) out.values[i] = p.D + tq[i] / (3.0 * p.b);
            break;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out.values[i] >= 0.0)) {
            std::ostringstream msg;
            msg << label << ": negative effective diffusivity " << out.values[i] << " at " << where(rho.grid(), i);
            throw InstabilityError(msg.str());
        }
    }
    return out;
}

double stable_dt(const Model& model, const DensityProfile& rho, double t) {
    Stepper s(model, rho.grid());
    std::vector<double> v(rho.values().begin(), rho.values().end());
    return s.prepare(v, t);
}

DensityProfile step(const Model& model, const DensityProfile& rho, double t, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("smoluchowski: dt must be positive");
    Stepper s(model, rho.grid());
    std::vector<double> v(rho.values().begin(), rho.values().end());
    const double bound = s.prepare(v, midpoint_time(model) ? t + 0.5 * dt : t);
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "smoluchowski: dt = " << dt << " exceeds the stability bound " << bound;
        throw InstabilityError(msg.str());
    }
    s.apply(v, dt);
    return DensityProfile::adopt(rho.grid(), std::move(v));
}

RunResult run(const Model& model, const DensityProfile& rho0, double t0, double t1, std::size_t outputs) {
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("smoluchowski: need t1 > t0");
    if (outputs == 0) throw DomainError("smoluchowski: outputs must be >= 1");
    if (!(t0 > model.earliest_time())) {
        std::ostringstream msg;
        msg << Model::variant_name(model.variant()) << ": start time " << t0 << " must exceed "
            << model.earliest_time();
        throw DomainError(msg.str());
    }
    const auto& grid = rho0.grid();
    const auto& p = model.params();
    const Moments m0 = moments(rho0);
    const double sigmaPred = std::sqrt(m0.sigma2 + 2.0 * p.D * (t1 - t0));
    if (sigmaPred > grid.length() / 8.0) {
        std::ostringstream msg;
        msg << "smoluchowski: predicted final width " << sigmaPred << " exceeds (xMax - xMin)/8 = "
            << grid.length() / 8.0 << "; widen the grid";
        throw DomainError(msg.str());
    }

    RunResult res{rho0, DispersionCurve(Model::variant_name(model.variant())), {}, {}, {}, 0};
    auto record = [&](double t, const std::vector<double>& v) {
        const auto prof = DensityProfile::adopt(grid, v);
        const Moments mm = moments(prof);
        res.dispersion.append(t, mm.sigma2);
        res.mean.push_back(mm.mean);
        res.excessKurtosis.push_back(mm.excessKurtosis);
        res.mass.push_back(grid.integrate(v));
    };

    std::vector<double> rho(rho0.values().begin(), rho0.values().end());
    record(t0, rho);
    Stepper stepper(model, grid);
    const bool mid = midpoint_time(model);
    for (std::size_t k = 0; k < outputs; ++k) {
        const double ta = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(outputs);
        const double tb = k + 1 == outputs ? t1 : t0 + (t1 - t0) * static_cast<double>(k + 1) / static_cast<double>(outputs);
        // margin so a slowly tightening bound does not trip the per-step check
        const double bound = 0.9 * stepper.prepare(rho, ta);
        long left = static_cast<long>(std::ceil((tb - ta) / bound));
        double dt = (tb - ta) / static_cast<double>(left);
        int replans = 0;
        while (left > 0) {
            const double t = tb - dt * static_cast<double>(left);
            const double b = stepper.prepare(rho, mid ? t + 0.5 * dt : t);
            if (dt > b * (1.0 + 1e-12)) {
                // bound tightened mid-interval: spread the rest over smaller steps
                if (++replans > 100) {
                    std::ostringstream msg;
                    msg << "smoluchowski: stability bound keeps collapsing (" << b << ") at t = " << t;
                    throw InstabilityError(msg.str());
                }
                left = static_cast<long>(std::ceil((tb - t) / (0.9 * b)));
                dt = (tb - t) / static_cast<double>(left);
                continue;
            }
            stepper.apply(rho, dt);
            --left;
            ++res.steps;
        }
        record(tb, rho);
    }
    res.finalDensity = DensityProfile::adopt(grid, std::move(rho));
    return res;
}

}  // namespace qfp::smoluchowski

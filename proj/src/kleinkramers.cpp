#include "qfp/kleinkramers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qfp/errors.hpp"

namespace qfp::kramers {

namespace {

constexpr double kSafety = 0.4;
constexpr double kMarginalNegative = -1e-10;

std::string at_x(double x) {
    std::ostringstream s;
    s << "x = " << x;
    return s.str();
}

// Owns the per-row collision coefficients and scratch buffers for one model.
class Engine {
public:
    explicit Engine(const KramersModel& model)
        : model_(model), g_(model.grid()), nx_(g_.x.size()), np_(g_.p.size()),
          hx_(g_.x.spacing()), hp_(g_.p.spacing()),
          periodic_(model.x_boundary() == XBoundary::Periodic),
          vel_(np_), pf_(np_ - 1), dV1_(nx_), dV3_(nx_), theta_(nx_, 0.0), thetaBuilt_(nx_, -1.0),
          a_(nx_ * (np_ - 1)), c_(nx_ * (np_ - 1)), face_(np_), flux_(np_), rhoRaw_(nx_), rhoOk_(nx_) {
        const auto& p = model.params();
        for (std::size_t j = 0; j < np_; ++j) vel_[j] = g_.p.node(j) / p.m;
        for (std::size_t j = 0; j + 1 < np_; ++j) pf_[j] = 0.5 * (g_.p.node(j) + g_.p.node(j + 1));
        const bool quantumStreaming = model.variant() != KramersModel::Variant::Classical && p.hbar != 0.0;
        for (std::size_t i = 0; i < nx_; ++i) {
            const double x = g_.x.node(i);
            dV1_[i] = model.potential().d1(x);
            dV3_[i] = quantumStreaming ? p.hbar * p.hbar / 24.0 * model.potential().d3(x) : 0.0;
        }
        pmax_ = std::max(std::abs(g_.p.lo()), std::abs(g_.p.hi()));
        if (model.variant() == KramersModel::Variant::Nonlinear && model.smoothing() > 0.0) {
            const double w = model.smoothing() / hx_;
            const auto half = std::min(static_cast<std::size_t>(std::ceil(4.0 * w)), nx_ / 2);
            for (std::size_t d = 0; d <= half; ++d) kernel_.push_back(std::exp(-0.5 * (d / w) * (d / w)));
        }
        for (std::size_t i = 0; i < nx_; ++i) {
            v1max_ = std::max(v1max_, std::abs(dV1_[i]));
            v3max_ = std::max(v3max_, std::abs(dV3_[i]));
        }
        // time-independent temperatures are set once
        switch (model.variant()) {
            case KramersModel::Variant::Classical: set_constant(p.kT); break;
            case KramersModel::Variant::Coffey: {
                const double c = p.hbar * p.hbar / (12.0 * p.m * p.kT);
                for (std::size_t i = 0; i < nx_; ++i) theta_[i] = p.kT + c * model.potential().d2(g_.x.node(i));
                check_theta();
                build();
                break;
            }
            case KramersModel::Variant::LogRef:
            case KramersModel::Variant::Nonlinear:
                if (p.hbar == 0.0) set_constant(p.kT);
                break;
        }
    }

    // Theta for the state W at time t.
    void refresh(const double* W, double t) {
        const auto& p = model_.params();
        if (p.hbar == 0.0) return;
        if (model_.variant() == KramersModel::Variant::Nonlinear) {
            theta_from(marginal(W));
        } else if (model_.variant() == KramersModel::Variant::LogRef) {
            if (refTime_ && (*refTime_ == t || !model_.reference().is_free_particle())) return;
            theta_from(model_.reference().evaluate(g_.x, t));
            refTime_ = t;
        }
    }

    void theta_from(const DensityProfile& rho) {
        const auto& p = model_.params();
        const auto lc = functionals::log_curvature(rho, model_.floor());
        const auto ok = functionals::resolved_nodes(rho, model_.floor());
        std::vector<double> q(nx_, 0.0);  // rho * curvature, zero where unresolved
        for (std::size_t i = 0; i < nx_; ++i) rhoOk_[i] = ok[i] ? rho[i] : 0.0;
        for (std::size_t i = 0; i < nx_; ++i) q[i] = rhoOk_[i] * lc[i];
        smooth(q);
        smooth(rhoOk_);
        // nodes far from any resolved density keep kT
        const double c = p.hbar * p.hbar / (12.0 * p.m);
        const double tiny = 1e-300;
        for (std::size_t i = 0; i < nx_; ++i)
            theta_[i] = rhoOk_[i] > tiny ? p.kT - c * q[i] / rhoOk_[i] : p.kT;
        check_theta();
        build();
    }

    // Gaussian window of the model's smoothing width, cut at 4 widths
    void smooth(std::vector<double>& f) {
        if (kernel_.size() <= 1) return;
        const std::size_t half = kernel_.size() - 1;
        // padded copy: wrapped when periodic, zeros beyond walls
        pad_.assign(nx_ + 2 * half, 0.0);
        std::copy(f.begin(), f.end(), pad_.begin() + static_cast<std::ptrdiff_t>(half));
        if (periodic_) {
            for (std::size_t d = 0; d < half; ++d) {
                pad_[half - 1 - d] = f[(nx_ - 1 - d % nx_) % nx_];
                pad_[half + nx_ + d] = f[d % nx_];
            }
        }
        for (std::size_t i = 0; i < nx_; ++i) {
            const double* c = pad_.data() + half + i;
            double s = kernel_[0] * c[0];
            for (std::size_t d = 1; d <= half; ++d) s += kernel_[d] * (c[d] + *(c - d));
            f[i] = s;
        }
    }

    // out = streaming rate of W
    void streaming(const double* W, double* out) {
        std::fill(out, out + nx_ * np_, 0.0);
        // x advection, one face row at a time
        const std::size_t nfaces = periodic_ ? nx_ : nx_ - 1;
        const double cIn = 1.0 / hx_;
        const double cWall = periodic_ ? cIn : 2.0 / hx_;
        for (std::size_t k = 0; k < nfaces; ++k) {
            const std::size_t l = k, r = (k + 1) % nx_;
            const double* Wl = W + l * np_;
            const double* Wr = W + r * np_;
            const bool fourth = periodic_ || (k >= 1 && k + 2 < nx_);
            if (fourth) {
                const double* Wm = W + ((k + nx_ - 1) % nx_) * np_;
                const double* Wp = W + ((k + 2) % nx_) * np_;
                for (std::size_t j = 0; j < np_; ++j)
                    flux_[j] = vel_[j] * ((7.0 * (Wl[j] + Wr[j]) - (Wm[j] + Wp[j])) / 12.0);
            } else {
                for (std::size_t j = 0; j < np_; ++j) flux_[j] = vel_[j] * (0.5 * (Wl[j] + Wr[j]));
            }
            const double cl = (!periodic_ && l == 0) ? cWall : cIn;
            const double cr = (!periodic_ && r == nx_ - 1) ? cWall : cIn;
            double* ol = out + l * np_;
            double* orr = out + r * np_;
            for (std::size_t j = 0; j < np_; ++j) {
                ol[j] -= cl * flux_[j];
                orr[j] += cr * flux_[j];
            }
        }
        // force and quantum terms act along p within each row
        const double inv = 1.0 / hp_;
        for (std::size_t i = 0; i < nx_; ++i) {
            const double* w = W + i * np_;
            double* o = out + i * np_;
            if (dV1_[i] != 0.0) {
                const double f = dV1_[i];
                for (std::size_t j = 0; j + 1 < np_; ++j) {
                    const bool fourth = j >= 1 && j + 2 < np_;
                    const double gface = fourth ? (7.0 * (w[j] + w[j + 1]) - (w[j - 1] + w[j + 2])) / 12.0
                                                : 0.5 * (w[j] + w[j + 1]);
                    face_[j] = f * gface;
                }
                scatter(face_.data(), o, inv);
            }
            if (dV3_[i] != 0.0) {
                const double c = -dV3_[i] / (2.0 * hp_ * hp_);  // minus sign of the term folded in
                face_[0] = 0.0;
                face_[np_ - 2] = 0.0;
                for (std::size_t j = 1; j + 2 < np_; ++j) face_[j] = c * (w[j + 2] - w[j + 1] - w[j] + w[j - 1]);
                scatter(face_.data(), o, inv);
            }
        }
    }

    // out (+)= collision rate of W with the current Theta
    void collision(const double* W, double* out, bool accumulate) {
        if (!accumulate) std::fill(out, out + nx_ * np_, 0.0);
        const std::size_t nf = np_ - 1;
        for (std::size_t i = 0; i < nx_; ++i) {
            const double* w = W + i * np_;
            const double* a = a_.data() + i * nf;
            const double* c = c_.data() + i * nf;
            double* o = out + i * np_;
            for (std::size_t j = 0; j < nf; ++j) face_[j] = a[j] * w[j + 1] - c[j] * w[j];
            o[0] += 2.0 * face_[0];
            for (std::size_t j = 1; j < nf; ++j) o[j] += face_[j] - face_[j - 1];
            o[np_ - 1] -= 2.0 * face_[nf - 1];
        }
    }

    void rate(const double* W, double t, double* out) {
        refresh(W, t);
        streaming(W, out);
        collision(W, out, true);
    }

    [[nodiscard]] double bound() const {
        const auto& p = model_.params();
        const double thetaMax = *std::max_element(theta_.begin(), theta_.end());
        double lim = std::numeric_limits<double>::infinity();
        if (pmax_ > 0.0) lim = std::min(lim, hx_ * p.m / pmax_);
        if (v1max_ > 0.0) lim = std::min(lim, hp_ / v1max_);
        lim = std::min(lim, hp_ * hp_ / (2.0 * p.b * thetaMax));
        if (v3max_ > 0.0) lim = std::min(lim, hp_ * hp_ * hp_ / v3max_);  // v3 already holds hbar^2 V'''/24
        return kSafety * lim;
    }

    [[nodiscard]] const std::vector<double>& theta() const { return theta_; }
    [[nodiscard]] std::size_t size() const { return nx_ * np_; }

private:
    // face values f_j (j = 0..np-2) -> node rates, half cells at the p walls
    void scatter(const double* f, double* o, double inv) const {
        o[0] += 2.0 * inv * f[0];
        for (std::size_t j = 1; j + 1 < np_; ++j) o[j] += inv * (f[j] - f[j - 1]);
        o[np_ - 1] -= 2.0 * inv * f[np_ - 2];
    }

    DensityProfile marginal(const double* W) {
        for (std::size_t i = 0; i < nx_; ++i) {
            const double* w = W + i * np_;
            double s = 0.0;
            for (std::size_t j = 0; j < np_; ++j) s += g_.p.weight(j) * w[j];
            if (!std::isfinite(s)) throw IntegrityError("kleinkramers: non-finite marginal at " + at_x(g_.x.node(i)));
            if (s < kMarginalNegative)
                throw IntegrityError("kleinkramers: negative x-marginal at " + at_x(g_.x.node(i)));
            rhoRaw_[i] = std::max(s, 0.0);
        }
        return DensityProfile::normalized(g_.x, rhoRaw_);
    }

    void set_constant(double kT) {
        std::fill(theta_.begin(), theta_.end(), kT);
        build();
    }

    void check_theta() const {
        for (std::size_t i = 0; i < nx_; ++i) {
            if (!(theta_[i] > 0.0)) {
                std::ostringstream msg;
                msg << KramersModel::variant_name(model_.variant()) << ": effective temperature " << theta_[i]
                    << " <= 0 at " << at_x(g_.x.node(i));
                throw InstabilityError(msg.str());
            }
        }
    }

    // Scharfetter-Gummel weights; a Maxwellian at temperature Theta is an exact null vector.
    void build() {
        const auto& p = model_.params();
        const std::size_t nf = np_ - 1;
        for (std::size_t i = 0; i < nx_; ++i) {
            const double th = theta_[i];
            if (th == thetaBuilt_[i]) continue;
            thetaBuilt_[i] = th;
            const double s = p.b * th / (hp_ * hp_);
            const double zs = hp_ / (p.m * th);
            const double zLo = pf_[0] * zs, zHi = pf_[nf - 1] * zs;
            const bool direct = std::max(std::abs(zLo), std::abs(zHi)) > 30.0;
            // e^z along the row by recurrence; faces near p = 0 use expm1 directly
            double E = std::exp(zLo);
            const double ratio = std::exp((pf_[nf - 1] - pf_[0]) / static_cast<double>(nf - 1) * zs);
            double* a = a_.data() + i * nf;
            double* c = c_.data() + i * nf;
            for (std::size_t j = 0; j < nf; ++j) {
                const double z = pf_[j] * zs;
                double bz, bmz;
                if (std::abs(z) < 1e-6) {
                    bz = 1.0 - z * (0.5 - z / 12.0);
                    bmz = 1.0 + z * (0.5 + z / 12.0);
                } else if (std::abs(z) < 0.1 || direct) {
                    const double em1 = std::expm1(z);
                    bz = z / em1;
                    bmz = bz * (em1 + 1.0);
                } else {
                    bz = z / (E - 1.0);
                    bmz = bz * E;
                }
                a[j] = s * bmz;
                c[j] = s * bz;
                E *= ratio;
            }
        }
    }

    const KramersModel& model_;
    const PhaseGrid& g_;
    std::size_t nx_, np_;
    double hx_, hp_;
    bool periodic_;
    std::vector<double> vel_, pf_, dV1_, dV3_, theta_, thetaBuilt_, a_, c_, face_, flux_, rhoRaw_, rhoOk_, pad_,
        kernel_;
    double pmax_ = 0.0, v1max_ = 0.0, v3max_ = 0.0;
    std::optional<double> refTime_;
};

void check_grid(const KramersModel& model, const WignerField& w) {
    if (!(w.grid() == model.grid())) throw DomainError("kleinkramers: field grid differs from the model grid");
}

void check_phase_grid(const PhaseGrid& g) {
    if (g.p.size() < 7) throw DomainError("kleinkramers: need at least 7 momentum nodes");
}

double weighted_norm(const PhaseGrid& g, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.p.size(); ++j) {
            const double e = v[g.index(i, j)];
            s += g.x.weight(i) * g.p.weight(j) * e * e;
        }
    return std::sqrt(s);
}

// One RK4 step in place using the caller's engine and scratch.
struct Rk4 {
    explicit Rk4(std::size_t n) : k(n), acc(n), s(n) {}
    std::vector<double> k, acc, s;

    void step(Engine& e, std::vector<double>& W, double t, double dt) {
        const std::size_t n = W.size();
        e.rate(W.data(), t, k.data());
        for (std::size_t q = 0; q < n; ++q) {
            acc[q] = k[q];
            s[q] = W[q] + 0.5 * dt * k[q];
        }
        e.rate(s.data(), t + 0.5 * dt, k.data());
        for (std::size_t q = 0; q < n; ++q) {
            acc[q] += 2.0 * k[q];
            s[q] = W[q] + 0.5 * dt * k[q];
        }
        e.rate(s.data(), t + 0.5 * dt, k.data());
        for (std::size_t q = 0; q < n; ++q) {
            acc[q] += 2.0 * k[q];
            s[q] = W[q] + dt * k[q];
        }
        e.rate(s.data(), t + dt, k.data());
        const double c = dt / 6.0;
        for (std::size_t q = 0; q < n; ++q) W[q] += c * (acc[q] + k[q]);
    }
};

// Mass with the weights the flux form conserves: a periodic x axis has no end half cells.
double scheme_mass(const KramersModel& model, const std::vector<double>& W) {
    const auto& g = model.grid();
    if (model.x_boundary() == XBoundary::ZeroFlux) return g.integrate(W);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.p.size(); ++j) s += g.p.weight(j) * W[g.index(i, j)];
    return s * g.x.spacing();
}

void check_mass(const KramersModel& model, const std::vector<double>& W, double before) {
    const double after = scheme_mass(model, W);
    if (!std::isfinite(after)) throw IntegrityError("kleinkramers: non-finite field");
    if (std::abs(after - before) > 1e-10 * std::abs(before)) {
        std::ostringstream msg;
        msg << "kleinkramers: mass changed by " << after - before << " in one step";
        throw IntegrityError(msg.str());
    }
}

// The periodic scheme conserves the uniform sum; the trapezoid sum that WignerField
// checks differs from it by the end half cells, so rescale there instead of adopting.
WignerField as_field(const KramersModel& model, std::vector<double> W) {
    if (model.x_boundary() == XBoundary::Periodic) return WignerField::normalized(model.grid(), std::move(W));
    return WignerField::adopt(model.grid(), std::move(W));
}

}  // namespace

KramersModel KramersModel::classical(const PhysicalParams& p, Potential v, PhaseGrid grid, XBoundary xb) {
    check_phase_grid(grid);
    return {Variant::Classical, p, std::move(v), std::move(grid), xb};
}

KramersModel KramersModel::coffey(const PhysicalParams& p, Potential v, PhaseGrid grid, XBoundary xb) {
    check_phase_grid(grid);
    const double c = p.hbar * p.hbar / (12.0 * p.m * p.kT);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        const double x = grid.x.node(i);
        if (!(p.kT + c * v.d2(x) > 0.0)) {
            std::ostringstream msg;
            msg << "coffey: V'' = " << v.d2(x) << " at x = " << x
                << " makes the effective temperature nonpositive (V'' must exceed -12 m kT^2/hbar^2)";
            throw DomainError(msg.str());
        }
    }
    return {Variant::Coffey, p, std::move(v), std::move(grid), xb};
}

KramersModel KramersModel::logref(const PhysicalParams& p, Potential v, ReferenceDensity ref, PhaseGrid grid,
                                  XBoundary xb) {
    check_phase_grid(grid);
    KramersModel m(Variant::LogRef, p, std::move(v), std::move(grid), xb);
    m.reference_ = std::move(ref);
    return m;
}

KramersModel KramersModel::nonlinear(const PhysicalParams& p, Potential v, PhaseGrid grid, XBoundary xb,
                                     double floor, double smoothing) {
    check_phase_grid(grid);
    if (!(floor > 0.0) || floor > 1e-3) throw DomainError("kleinkramers: floor must lie in (0, 1e-3]");
    if (!std::isfinite(smoothing)) throw DomainError("kleinkramers: smoothing must be finite");
    KramersModel m(Variant::Nonlinear, p, std::move(v), std::move(grid), xb);
    m.floor_ = floor;
    m.smoothing_ = smoothing < 0.0 ? 0.5 * p.lambdaT : smoothing;
    return m;
}

KramersModel::Variant KramersModel::parse_variant(std::string_view name) {
    if (name == "classical") return Variant::Classical;
    if (name == "coffey") return Variant::Coffey;
    if (name == "logref") return Variant::LogRef;
    if (name == "nonlinear") return Variant::Nonlinear;
    throw DomainError("unknown kramers variant '" + std::string(name) +
                      "' (known: classical, coffey, logref, nonlinear)");
}

std::string KramersModel::variant_name(Variant v) {
    switch (v) {
        case Variant::Classical: return "classical";
        case Variant::Coffey: return "coffey";
        case Variant::LogRef: return "logref";
        case Variant::Nonlinear: return "nonlinear";
    }
    return "?";
}

const ReferenceDensity& KramersModel::reference() const {
    if (!reference_) throw DomainError("kleinkramers: model has no reference density");
    return *reference_;
}

FieldOnGrid effective_temperature(const KramersModel& model, const WignerField& w, double t) {
    check_grid(model, w);
    Engine e(model);
    e.refresh(w.values().data(), t);
    return {model.grid().x, e.theta()};
}

PhaseRate streaming_apply(const KramersModel& model, const WignerField& w) {
    check_grid(model, w);
    Engine e(model);
    PhaseRate r{model.grid(), std::vector<double>(e.size())};
    e.streaming(w.values().data(), r.values.data());
    return r;
}

PhaseRate collision_apply(const KramersModel& model, const WignerField& w, const DensityProfile* rho, double t) {
    check_grid(model, w);
    Engine e(model);
    if (rho != nullptr && model.variant() == KramersModel::Variant::Nonlinear && model.params().hbar != 0.0)
        e.theta_from(*rho);
    else
        e.refresh(w.values().data(), t);
    PhaseRate r{model.grid(), std::vector<double>(e.size())};
    e.collision(w.values().data(), r.values.data(), false);
    return r;
}

double stable_dt(const KramersModel& model, const WignerField& w, double t) {
    check_grid(model, w);
    Engine e(model);
    e.refresh(w.values().data(), t);
    return e.bound();
}

WignerField step(const KramersModel& model, const WignerField& w, double t, double dt) {
    check_grid(model, w);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("kleinkramers: dt must be positive");
    Engine e(model);
    e.refresh(w.values().data(), t);
    const double bound = e.bound();
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "kleinkramers: dt = " << dt << " exceeds the stability bound " << bound;
        throw InstabilityError(msg.str());
    }
    std::vector<double> W(w.values().begin(), w.values().end());
    Rk4 rk(W.size());
    const double m0 = scheme_mass(model, W);
    rk.step(e, W, t, dt);
    check_mass(model, W, m0);
    return as_field(model, std::move(W));
}

double stationarity_residual(const KramersModel& model, const WignerField& w, double t) {
    check_grid(model, w);
    Engine e(model);
    const auto& g = model.grid();
    std::vector<double> r(e.size());
    e.rate(w.values().data(), t, r.data());
    const auto& p = model.params();
    std::vector<double> pert(e.size()), c(e.size());
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.p.size(); ++j) {
            const double pj = g.p.node(j);
            pert[g.index(i, j)] = w.at(i, j) * pj * pj / (p.m * p.kT);
        }
    e.collision(pert.data(), c.data(), false);
    const double denom = weighted_norm(g, c);
    if (!(denom > 0.0)) throw NumericalError("stationarity_residual: degenerate normalization");
    return weighted_norm(g, r) / denom;
}

RunResult run(const KramersModel& model, const WignerField& w0, double t0, double t1, std::size_t outputs) {
    check_grid(model, w0);
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("kleinkramers: need t1 > t0");
    if (outputs == 0) throw DomainError("kleinkramers: outputs must be >= 1");
    if (model.variant() == KramersModel::Variant::LogRef && model.reference().is_free_particle() &&
        !(t0 + model.reference().time_offset() > 0.0))
        throw DomainError("kleinkramers: free reference density is singular at the start time");

    RunResult res{w0, DispersionCurve(KramersModel::variant_name(model.variant())), {}, {}, {}, 0, 0.0};
    auto record = [&](double t, const std::vector<double>& W) {
        const auto field = as_field(model, W);
        const auto mx = moments(marginal_x(field).density);
        const auto mp = moments(marginal_p(field).density);
        res.dispersionX.append(t, mx.sigma2);
        res.sigma2P.push_back(mp.sigma2);
        res.meanX.push_back(mx.mean);
        res.mass.push_back(scheme_mass(model, W));
    };

    std::vector<double> W(w0.values().begin(), w0.values().end());
    record(t0, W);
    Engine e(model);
    Rk4 rk(W.size());
    for (std::size_t k = 0; k < outputs; ++k) {
        const double ta = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(outputs);
        const double tb =
            k + 1 == outputs ? t1 : t0 + (t1 - t0) * static_cast<double>(k + 1) / static_cast<double>(outputs);
        e.refresh(W.data(), ta);
        const double bound = 0.9 * e.bound();
        const auto nsub = static_cast<long>(std::ceil((tb - ta) / bound));
        const double dt = (tb - ta) / static_cast<double>(nsub);
        for (long j = 0; j < nsub; ++j) {
            const double t = ta + dt * static_cast<double>(j);
            const double m0 = scheme_mass(model, W);
            rk.step(e, W, t, dt);
            check_mass(model, W, m0);
            ++res.steps;
        }
        res.dt = dt;
        record(tb, W);
    }
    res.finalField = as_field(model, std::move(W));
    return res;
}

}  // namespace qfp::kramers

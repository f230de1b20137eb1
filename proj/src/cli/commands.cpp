#include "qfp/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "qfp/automodel.hpp"
#include "qfp/cli/config.hpp"
#include "qfp/cli/output.hpp"
#include "qfp/dispersion.hpp"
#include "qfp/errors.hpp"
#include "qfp/kleinkramers.hpp"
#include "qfp/params.hpp"
#include "qfp/smoluchowski.hpp"

namespace qfp::cli {

namespace {

const Schema kPhysical = {{"m", "1"}, {"b", "1"}, {"kT", "1"}, {"hbar", "1"}};

// Physical keys first; an entry in extra with the same key only changes its default.
Schema with_physical(const Schema& extra) {
    Schema s = kPhysical;
    for (const auto& e : extra) {
        auto it = std::find_if(s.begin(), s.end(), [&](const auto& x) { return x.first == e.first; });
        if (it != s.end()) it->second = e.second;
        else s.push_back(e);
    }
    return s;
}

PhysicalParams params_of(const Config& c) {
    return derive_params(c.number("m"), c.number("b"), c.number("kT"), c.number("hbar"));
}

void header(CsvTable& t, const std::string& command, const Config& c, const PhysicalParams& p) {
    t.meta("command", command);
    for (const auto& [k, v] : c.entries()) t.meta(k, v);
    t.meta("D", p.D);
    t.meta("lambdaT", p.lambdaT);
    t.meta("beta", p.beta);
}

// CSV to the file named by "out", or to the stream when it is empty; SVG likewise optional.
void emit(const Config& c, const CsvTable& table, const Chart* chart, std::ostream& out, std::ostream& err) {
    std::ostringstream csv;
    table.write(csv);
    const std::string& path = c.text("out");
    if (path.empty()) {
        out << csv.str();
    } else {
        write_file(path, csv.str());
    }
    std::string svgPath = c.text("svg");
    if (chart && !svgPath.empty()) write_file(svgPath, render_svg(*chart));
    err << table.rows() << " rows" << (path.empty() ? "" : " -> " + path)
        << (svgPath.empty() || !chart ? "" : ", chart -> " + svgPath) << '\n';
}

LineStyle style_for(std::size_t k) {
    static const LineStyle cycle[] = {LineStyle::Solid, LineStyle::Dashed, LineStyle::Dotted, LineStyle::DashDot};
    return cycle[k % 4];
}

int cmd_params(const std::vector<std::string>& flags, std::ostream& out, std::ostream&) {
    const Config c = Config::resolve("params", kPhysical, flags);
    const PhysicalParams p = params_of(c);
    for (const auto& [k, v] : c.entries()) out << k << '=' << v << '\n';
    out << "D=" << format_number(p.D) << '\n';
    out << "lambdaT=" << format_number(p.lambdaT) << '\n';
    out << "beta=" << format_number(p.beta) << '\n';
    out << "semiclassical_threshold=" << format_number(p.semiclassical_threshold()) << '\n';
    if (p.is_classical())
        out << "note=classical regime (hbar = 0), all laws reduce to 2Dt\n";
    else
        out << "note=large-time semiclassical law applicable for large times t > lambdaT^2/(2D)\n";
    return 0;
}

int cmd_dispersion(const std::vector<std::string>& flags, std::ostream& out, std::ostream& err) {
    const Config c = Config::resolve(
        "dispersion",
        with_physical({{"laws", "classical,eq13,lambert"}, {"t_min", "0"}, {"t_max", "1"}, {"samples", "11"},
                       {"spacing", "linear"}, {"out", ""}, {"svg", ""}}),
        flags);
    const PhysicalParams p = params_of(c);
    std::vector<dispersion::DispersionLaw> laws;
    for (const auto& name : c.list("laws")) laws.push_back(dispersion::DispersionLaw::parse(name, p));
    if (laws.empty()) throw ConfigError("laws: at least one law is required");
    const double t0 = c.number("t_min"), t1 = c.number("t_max");
    const std::size_t n = c.count("samples");
    if (n < 2) throw ConfigError("samples must be >= 2");
    if (!(t1 > t0) || t0 < 0.0) throw ConfigError("need 0 <= t_min < t_max");
    const std::string& spacing = c.text("spacing");
    if (spacing != "linear" && spacing != "log") throw ConfigError("spacing must be linear or log");
    if (spacing == "log" && !(t0 > 0.0)) throw ConfigError("log spacing needs t_min > 0");

    CsvTable table;
    header(table, "dispersion", c, p);
    std::vector<std::string> cols{"t"};
    Chart chart{"Dispersion laws", "t", "sigma^2", {}};
    for (std::size_t k = 0; k < laws.size(); ++k) {
        cols.push_back(laws[k].name());
        chart.series.push_back({laws[k].name(), style_for(k), {}});
    }
    table.columns(cols);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        const double t = i + 1 == n ? t1 : spacing == "log" ? t0 * std::pow(t1 / t0, f) : t0 + (t1 - t0) * f;
        std::vector<double> row{t};
        for (std::size_t k = 0; k < laws.size(); ++k) {
            const double v = laws[k](t);
            row.push_back(v);
            chart.series[k].points.emplace_back(t, v);
        }
        table.row(row);
    }
    emit(c, table, &chart, out, err);
    return 0;
}

automodel::Settings automodel_settings(const Config& c) {
    automodel::Settings s;
    s.x0 = c.number("x0");
    s.xMax = c.number("x_max");
    s.meshIntervals = c.count("mesh");
    return s;
}

int cmd_figure1(const std::vector<std::string>& flags, std::ostream& out, std::ostream& err) {
    const Config c = Config::resolve("figure1",
                                     {{"s_max", "100"}, {"samples", "200"}, {"x0", "1e-3"}, {"x_max", "20"},
                                      {"mesh", "20000"}, {"out", ""}, {"svg", ""}},
                                     flags);
    const auto settings = automodel_settings(c);
    const double sMax = c.number("s_max");
    const double xm = settings.xMax;
    if (sMax > 8.0 * xm * xm) throw ConfigError("s_max exceeds 8 x_max^2; raise x_max");
    const auto shot = automodel::shoot(settings);
    const auto fig = automodel::figure1_curves(shot.solution, sMax, c.count("samples"));

    CsvTable table;
    table.meta("command", "figure1");
    for (const auto& [k, v] : c.entries()) table.meta(k, v);
    table.meta("c2_star", shot.c2Star);
    table.meta("yprime_xmax_minus_2", shot.diagnostics.objective);
    table.columns({"s", "u_numeric", "u_lambert", "u_classical"});
    Chart chart{"Universal dispersion: sigma^2/lambdaT^2 vs 2Dt/lambdaT^2", "s = 2Dt/lambdaT^2",
                "u = sigma^2/lambdaT^2",
                {{"solid: numerical self-similar solution", LineStyle::Solid, {}},
                 {"dashed: Lambert-W approximation", LineStyle::Dashed, {}},
                 {"dotted: classical Einstein law", LineStyle::Dotted, {}}}};
    for (std::size_t k = 0; k < fig.numeric.size(); ++k) {
        const double s = fig.numeric[k].t;
        table.row({s, fig.numeric[k].sigma2, fig.lambert[k].sigma2, fig.classical[k].sigma2});
        chart.series[0].points.emplace_back(s, fig.numeric[k].sigma2);
        chart.series[1].points.emplace_back(s, fig.lambert[k].sigma2);
        chart.series[2].points.emplace_back(s, fig.classical[k].sigma2);
    }
    emit(c, table, &chart, out, err);
    return 0;
}

int cmd_automodel(const std::vector<std::string>& flags, std::ostream& out, std::ostream& err) {
    const Config c = Config::resolve(
        "automodel", {{"x0", "1e-3"}, {"x_max", "20"}, {"mesh", "20000"}, {"stride", "20"}, {"out", ""}, {"svg", ""}},
        flags);
    const auto shot = automodel::shoot(automodel_settings(c));
    const std::size_t stride = c.count("stride");
    if (stride == 0) throw ConfigError("stride must be >= 1");
    const auto& sol = shot.solution;
    const auto ypp = sol.second_derivative();

    CsvTable table;
    table.meta("command", "automodel");
    for (const auto& [k, v] : c.entries()) table.meta(k, v);
    table.meta("c2_star", shot.c2Star);
    table.meta("yprime_xmax_minus_2", shot.diagnostics.objective);
    table.meta("bisection_evaluations", std::to_string(shot.diagnostics.evaluations));
    table.columns({"x", "y", "yprime", "residual"});
    Chart chart{"Self-similar solution", "x", "y", {{"y(x)", LineStyle::Solid, {}}, {"2x", LineStyle::Dotted, {}}}};
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        if (i % stride != 0 && i + 1 != sol.x.size()) continue;
        table.row({sol.x[i], sol.y[i], sol.yPrime[i], automodel::residual(sol.x[i], sol.y[i], sol.yPrime[i], ypp[i])});
        chart.series[0].points.emplace_back(sol.x[i], sol.y[i]);
        chart.series[1].points.emplace_back(sol.x[i], 2.0 * sol.x[i]);
    }
    emit(c, table, &chart, out, err);
    return 0;
}

// Comparison column: the implicit law is aligned to the initial variance by a time
// shift; other laws are evaluated at t as is.
std::function<double(double)> comparison(const std::string& name, const PhysicalParams& p, double t0, double sigma20) {
    if (name.empty() || name == "none") return {};
    const auto law = dispersion::DispersionLaw::parse(name, p);
    if (law.kind() == dispersion::DispersionLaw::Kind::Implicit) {
        const double tau = dispersion::implicit_lhs(p, sigma20) / (2.0 * p.D) - t0;
        return [p, tau](double t) { return dispersion::solve_implicit(p, t + tau); };
    }
    return [law](double t) { return law(t); };
}

int cmd_smoluchowski(const std::vector<std::string>& flags, std::ostream& out, std::ostream& err) {
    const Config c = Config::resolve(
        "smoluchowski",
        with_physical({{"variant", "eq12"}, {"n", "241"}, {"x_half_width", "0"}, {"t0", "0.01"}, {"t1", "0.1"},
                       {"sigma2_0", "0"}, {"outputs", "10"}, {"floor", "1e-12"}, {"comparison", "none"},
                       {"out", ""}, {"svg", ""}}),
        flags);
    const PhysicalParams p = params_of(c);
    using smoluchowski::Model;
    const auto variant = Model::parse_variant(c.text("variant"));
    const double t0 = c.number("t0"), t1 = c.number("t1");
    if (!(t1 > t0)) throw ConfigError("need t1 > t0");
    double s20 = c.number("sigma2_0");
    if (s20 <= 0.0) {
        if (variant == Model::Variant::Nonlinear) s20 = dispersion::solve_implicit(p, t0);
        else if (variant == Model::Variant::Semiclassical && t0 > p.semiclassical_threshold())
            s20 = dispersion::semiclassical(p, t0);
        else s20 = 2.0 * p.D * t0;
    }
    if (!(s20 > 0.0)) throw ConfigError("initial variance must be positive (raise t0 or set sigma2_0)");
    double half = c.number("x_half_width");
    if (half <= 0.0) half = 6.0 * std::sqrt(s20 + 2.0 * p.D * (t1 - t0));
    const auto grid = SpatialGrid::symmetric(half, c.count("n"));
    const double floor = c.number("floor");

    Model model = Model::classical(p);
    switch (variant) {
        case Model::Variant::Classical: break;
        case Model::Variant::Reference: model = Model::with_reference(ReferenceDensity::free_particle(p)); break;
        case Model::Variant::Semiclassical: model = Model::semiclassical(p); break;
        case Model::Variant::Nonlinear: model = Model::nonlinear(p, floor); break;
    }
    const auto rho0 = DensityProfile::gaussian(grid, 0.0, s20);
    const auto cmp = comparison(c.text("comparison"), p, t0, s20);
    const auto res = smoluchowski::run(model, rho0, t0, t1, c.count("outputs"));

    CsvTable table;
    header(table, "smoluchowski", c, p);
    table.meta("sigma2_initial", s20);
    table.meta("x_half_width_resolved", half);
    table.meta("steps", std::to_string(res.steps));
    std::vector<std::string> cols{"t", "sigma2", "mass", "excess_kurtosis"};
    if (cmp) cols.push_back(c.text("comparison"));
    table.columns(cols);
    Chart chart{"Position-space dispersion (" + c.text("variant") + ")", "t", "sigma^2",
                {{c.text("variant"), LineStyle::Solid, {}}}};
    if (cmp) chart.series.push_back({c.text("comparison"), LineStyle::Dashed, {}});
    for (std::size_t k = 0; k < res.dispersion.size(); ++k) {
        const double t = res.dispersion[k].t;
        std::vector<double> row{t, res.dispersion[k].sigma2, res.mass[k], res.excessKurtosis[k]};
        chart.series[0].points.emplace_back(t, res.dispersion[k].sigma2);
        if (cmp) {
            row.push_back(cmp(t));
            chart.series[1].points.emplace_back(t, row.back());
        }
        table.row(row);
    }
    emit(c, table, &chart, out, err);
    return 0;
}

int cmd_kramers(const std::vector<std::string>& flags, std::ostream& out, std::ostream& err) {
    const Config c = Config::resolve(
        "kramers",
        with_physical({{"hbar", "0"},
                       {"variant", "classical"},
                       {"potential", "0"},
                       {"nx", "128"},
                       {"np", "128"},
                       {"x_half_width", "0"},
                       {"p_half_width", "0"},
                       {"x_boundary", "zeroflux"},
                       {"t0", "0"},
                       {"t1", "10"},
                       {"outputs", "10"},
                       {"sigma2_x0", "1"},
                       {"sigma2_p0", "0"},
                       {"ref_offset", "auto"},
                       {"floor", "1e-12"},
                       {"smoothing", "auto"},
                       {"comparison", "none"},
                       {"out", ""},
                       {"svg", ""}}),
        flags);
    const PhysicalParams p = params_of(c);
    using kramers::KramersModel;
    // curvature window of the nonlinear variant; auto is lambdaT/2
    const double smoothing = c.text("smoothing") == "auto" ? -1.0 : c.number("smoothing");
    if (c.text("smoothing") != "auto" && smoothing < 0.0) throw ConfigError("smoothing must be >= 0 or auto");
    const auto variant = KramersModel::parse_variant(c.text("variant"));
    const Potential V(c.numbers("potential"));
    const double t0 = c.number("t0"), t1 = c.number("t1");
    if (!(t1 > t0)) throw ConfigError("need t1 > t0");
    const double sx0 = c.number("sigma2_x0");
    if (!(sx0 > 0.0)) throw ConfigError("sigma2_x0 must be positive");
    double sp0 = c.number("sigma2_p0");
    if (sp0 <= 0.0) sp0 = p.m * p.kT;
    const std::string& xbName = c.text("x_boundary");
    if (xbName != "zeroflux" && xbName != "periodic") throw ConfigError("x_boundary must be zeroflux or periodic");
    const auto xb = xbName == "periodic" ? kramers::XBoundary::Periodic : kramers::XBoundary::ZeroFlux;

    double xh = c.number("x_half_width");
    if (xh <= 0.0) {
        // the quantum rate 2 kappa/sigma^2 only falls, so its start value bounds the growth
        const double kappa = p.hbar * p.hbar / (12.0 * p.m * p.b);
        xh = 6.0 * std::sqrt(sx0 + 2.0 * (p.D + kappa / sx0) * (t1 - t0));
    }
    const auto xg = UniformGrid::symmetric(xh, c.count("nx"));
    const double offset = c.text("ref_offset") == "auto" ? sx0 / (2.0 * p.D) - t0 : c.number("ref_offset");

    auto build = [&](double ph) {
        PhaseGrid g{xg, UniformGrid::symmetric(ph, c.count("np"))};
        switch (variant) {
            case KramersModel::Variant::Classical: return KramersModel::classical(p, V, g, xb);
            case KramersModel::Variant::Coffey: return KramersModel::coffey(p, V, g, xb);
            case KramersModel::Variant::LogRef: {
                auto ref = V.is_zero() ? ReferenceDensity::free_particle(p, offset) : ReferenceDensity::boltzmann(p, V);
                return KramersModel::logref(p, V, ref, g, xb);
            }
            case KramersModel::Variant::Nonlinear: return KramersModel::nonlinear(p, V, g, xb, c.number("floor"), smoothing);
        }
        throw ConfigError("unreachable");
    };
    double ph = c.number("p_half_width");
    if (ph <= 0.0) {
        // six thermal widths at the hottest effective temperature of the start state
        const double guess = 6.0 * std::sqrt(std::max(p.m * p.kT, sp0));
        const auto m0 = build(guess);
        const auto w0 = WignerField::gaussian(m0.grid(), 0.0, sx0, sp0);
        const auto th = kramers::effective_temperature(m0, w0, t0);
        double tmax = p.kT;
        for (double v : th.values) tmax = std::max(tmax, v);
        ph = 6.0 * std::sqrt(std::max(p.m * tmax, sp0));
    }
    const auto model = build(ph);
    const auto w0 = WignerField::gaussian(model.grid(), 0.0, sx0, sp0);
    const auto cmp = comparison(c.text("comparison"), p, t0, sx0);
    const auto res = kramers::run(model, w0, t0, t1, c.count("outputs"));

    CsvTable table;
    header(table, "kramers", c, p);
    table.meta("x_half_width_resolved", xh);
    table.meta("p_half_width_resolved", ph);
    table.meta("steps", std::to_string(res.steps));
    std::vector<std::string> cols{"t", "sigma2_x", "sigma2_p", "mass"};
    if (cmp) cols.push_back(c.text("comparison"));
    table.columns(cols);
    Chart chart{"Phase-space run (" + c.text("variant") + ")", "t", "sigma_x^2",
                {{"sigma_x^2", LineStyle::Solid, {}}, {"sigma_p^2", LineStyle::Dotted, {}}}};
    if (cmp) chart.series.push_back({c.text("comparison"), LineStyle::Dashed, {}});
    for (std::size_t k = 0; k < res.dispersionX.size(); ++k) {
        const double t = res.dispersionX[k].t;
        std::vector<double> row{t, res.dispersionX[k].sigma2, res.sigma2P[k], res.mass[k]};
        chart.series[0].points.emplace_back(t, row[1]);
        chart.series[1].points.emplace_back(t, row[2]);
        if (cmp) {
            row.push_back(cmp(t));
            chart.series[2].points.emplace_back(t, row.back());
        }
        table.row(row);
    }
    emit(c, table, &chart, out, err);
    return 0;
}

void usage(std::ostream& os) {
    os << "usage: qfokker <command> [--config FILE] [--key value]...\n"
          "commands: params, dispersion, figure1, automodel, smoluchowski, kramers\n"
          "exit codes: 0 ok, 2 configuration/validation error, 3 numerical failure\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using Handler = int (*)(const std::vector<std::string>&, std::ostream&, std::ostream&);
    static const std::map<std::string, Handler> commands = {
        {"params", cmd_params},       {"dispersion", cmd_dispersion},     {"figure1", cmd_figure1},
        {"automodel", cmd_automodel}, {"smoluchowski", cmd_smoluchowski}, {"kramers", cmd_kramers}};
    if (args.empty()) {
        usage(err);
        return 2;
    }
    if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
        usage(out);
        return 0;
    }
    const auto it = commands.find(args[0]);
    if (it == commands.end()) {
        err << "qfokker: unknown command '" << args[0] << "'\n";
        usage(err);
        return 2;
    }
    const std::vector<std::string> flags(args.begin() + 1, args.end());
    try {
        return it->second(flags, out, err);
    } catch (const DomainError& e) {
        err << "qfokker " << args[0] << ": " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "qfokker " << args[0] << ": numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "qfokker " << args[0] << ": " << e.what() << '\n';
        return 3;
    }
}

}  // namespace qfp::cli

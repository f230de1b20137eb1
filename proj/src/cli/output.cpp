#include "qfp/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qfp/cli/config.hpp"

namespace qfp::cli {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void CsvTable::row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw std::logic_error("csv: row width differs from header");
    rows_.push_back(values);
}

void CsvTable::write(std::ostream& os) const {
    for (const auto& [k, v] : meta_) os << "# " << k << '=' << v << '\n';
    for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << columns_[c];
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_number(r[c]);
        os << '\n';
    }
}

namespace {

constexpr double kW = 800, kH = 600;
constexpr double kLeft = 90, kRight = 30, kTop = 50, kBottom = 70;

std::string fmt(double v, int prec = 2) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string tick_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

const char* dash(LineStyle s) {
    switch (s) {
        case LineStyle::Solid: return "";
        case LineStyle::Dashed: return " stroke-dasharray=\"10,6\"";
        case LineStyle::Dotted: return " stroke-dasharray=\"2,4\"";
        case LineStyle::DashDot: return " stroke-dasharray=\"10,4,2,4\"";
    }
    return "";
}

// 1, 2 or 5 times a power of ten, about n ticks over the span
double nice_step(double span, int n) {
    const double raw = span / n;
    const double p = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / p;
    return (f < 1.5 ? 1 : f < 3.5 ? 2 : f < 7.5 ? 5 : 10) * p;
}

}  // namespace

std::string render_svg(const Chart& chart) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : chart.series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!(x1 > x0)) { x0 = 0; x1 = 1; }
    if (!(y1 > y0)) { y0 = std::isfinite(y0) ? y0 - 1 : 0; y1 = y0 + 2; }
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    o << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
      << escape(chart.title) << "</text>\n";
    o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\""
      << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double sx = nice_step(x1 - x0, 6), sy = nice_step(y1 - y0, 6);
    for (double t = std::ceil(x0 / sx) * sx; t <= x1 + 1e-9 * sx; t += sx) {
        const double X = px(t);
        o << "<line x1=\"" << fmt(X) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(X) << "\" y2=\""
          << fmt(kTop + ph + 6) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(X) << "\" y=\"" << fmt(kTop + ph + 22)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(t)
          << "</text>\n";
    }
    for (double t = std::ceil(y0 / sy) * sy; t <= y1 + 1e-9 * sy; t += sy) {
        const double Y = py(t);
        o << "<line x1=\"" << fmt(kLeft - 6) << "\" y1=\"" << fmt(Y) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
          << fmt(Y) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(kLeft - 10) << "\" y=\"" << fmt(Y + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(t) << "</text>\n";
    }
    o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kH - 20)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(chart.xLabel)
      << "</text>\n";
    o << "<text x=\"20\" y=\"" << fmt(kTop + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"14\" transform=\"rotate(-90 20 " << fmt(kTop + ph / 2) << ")\">" << escape(chart.yLabel)
      << "</text>\n";

    for (const auto& s : chart.series) {
        o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"" << dash(s.style) << " points=\"";
        bool first = true;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            o << (first ? "" : " ") << fmt(px(x)) << ',' << fmt(py(y));
            first = false;
        }
        o << "\"/>\n";
    }
    // legend, top left inside the frame
    double ly = kTop + 20;
    for (const auto& s : chart.series) {
        o << "<line x1=\"" << fmt(kLeft + 15) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(kLeft + 55)
          << "\" y2=\"" << fmt(ly) << "\" stroke=\"black\" stroke-width=\"1.5\"" << dash(s.style) << "/>\n";
        o << "<text x=\"" << fmt(kLeft + 62) << "\" y=\"" << fmt(ly + 4)
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
        ly += 18;
    }
    o << "</svg>\n";
    return o.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace qfp::cli

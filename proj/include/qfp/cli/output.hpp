#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qfp::cli {

/// 17 significant digits, scientific notation; round-trips exactly.
[[nodiscard]] std::string format_number(double v);

/// Comma-separated table preceded by "# key=value" lines.
class CsvTable {
public:
    void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
    void meta(const std::string& key, double value) { meta_.emplace_back(key, format_number(value)); }
    void columns(std::vector<std::string> names) { columns_ = std::move(names); }
    void row(const std::vector<double>& values);
    void write(std::ostream& os) const;
    [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }

private:
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

enum class LineStyle { Solid, Dashed, Dotted, DashDot };

struct Series {
    std::string label;
    LineStyle style = LineStyle::Solid;
    std::vector<std::pair<double, double>> points;
};

struct Chart {
    std::string title;
    std::string xLabel;
    std::string yLabel;
    std::vector<Series> series;
};

/// Polyline chart on a fixed 800x600 viewBox with axes, ticks and a legend.
[[nodiscard]] std::string render_svg(const Chart& chart);

/// Writes text to path; ConfigError if the file cannot be written.
void write_file(const std::string& path, const std::string& text);

}  // namespace qfp::cli

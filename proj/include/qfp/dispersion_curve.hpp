#pragma once

#include <string>
#include <vector>

namespace qfp {

/// Time-ordered (t, sigma^2) samples with the name of the route that produced them.
/// The same container carries the universal (s, u) coordinates when produced by automodel.
class DispersionCurve {
public:
    struct Sample {
        double t;
        double sigma2;
    };

    DispersionCurve() = default;
    explicit DispersionCurve(std::string label) : label_(std::move(label)) {}

    /// Throws DomainError unless t is strictly greater than the previous sample and
    /// sigma2 is finite and nonnegative.
    void append(double t, double sigma2);

    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] const std::vector<Sample>& samples() const noexcept { return samples_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
    [[nodiscard]] const Sample& operator[](std::size_t i) const noexcept { return samples_[i]; }
    [[nodiscard]] const Sample& back() const noexcept { return samples_.back(); }

    [[nodiscard]] bool is_nondecreasing() const noexcept;

private:
    std::string label_;
    std::vector<Sample> samples_;
};

}  // namespace qfp

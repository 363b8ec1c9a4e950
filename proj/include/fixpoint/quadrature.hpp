#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace fixpoint {

/// Cumulative integral F(t) = ∫₀ᵗ f on [0, t_max] by the composite
/// trapezoid rule on a uniform grid.
///
/// Node values are prefix sums of per-cell increments, and evaluation
/// interpolates linearly inside a cell. With f >= 0 at every node the
/// increments are nonnegative, so F is non-decreasing everywhere,
/// including across cell boundaries in floating point.
class CumulativeIntegral {
public:
    /// Throws std::invalid_argument when subdivisions < 2 or t_max <= 0,
    /// and DomainError naming the node when f is negative or non-finite
    /// at a grid node.
    CumulativeIntegral(const std::function<double(double)>& integrand, double t_max, std::size_t subdivisions,
                       std::string label = "f");

    /// F(t). Throws DomainError for t outside [0, t_max].
    double operator()(double t) const;

    double t_max() const noexcept { return t_max_; }
    std::size_t subdivisions() const noexcept { return increments_.size(); }
    double step() const noexcept { return step_; }
    double node(std::size_t i) const noexcept { return static_cast<double>(i) * step_; }
    const std::vector<double>& node_values() const noexcept { return prefix_; }
    const std::string& label() const noexcept { return label_; }

private:
    double t_max_;
    double step_;
    std::vector<double> increments_;
    std::vector<double> prefix_;
    std::string label_;
};

}  // namespace fixpoint

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixpoint/expr.hpp"

namespace fixpoint {

/// A point outside its space, a dimension mismatch, or an argument
/// outside a function's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Element of a metric space: an index into a finite space, or a
/// coordinate vector in a box. Ordered lexicographically.
struct Point {
    std::size_t index = 0;
    std::vector<double> coords;

    static Point at_index(std::size_t i) { return Point{i, {}}; }
    static Point at(std::vector<double> c) { return Point{0, std::move(c)}; }
    static Point at(double x) { return Point{0, {x}}; }

    bool is_indexed() const noexcept { return coords.empty(); }

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

std::string to_string(const Point& p);

enum class SpaceKind { Interval, Box, Finite };

/// p-metric used on interval and box spaces.
enum class Norm { L1, L2, LInf };

/// Closed box (interval when one-dimensional) or finite set with a
/// user-supplied distance matrix.
///
/// Finite matrices are stored as given; metric axioms are not enforced at
/// construction so that validate_metric() can report violations.
class MetricSpace {
public:
    static MetricSpace interval(double lower, double upper);
    static MetricSpace box(std::vector<double> lower, std::vector<double> upper, Norm norm = Norm::L2);
    static MetricSpace finite(std::vector<std::vector<double>> matrix);

    SpaceKind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == SpaceKind::Finite; }
    Norm norm() const noexcept { return norm_; }

    /// Coordinate dimension (0 for finite spaces).
    std::size_t dimension() const noexcept { return lower_.size(); }
    /// Number of points (finite spaces only; 0 otherwise).
    std::size_t cardinality() const noexcept { return n_; }

    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    double matrix_entry(std::size_t i, std::size_t j) const { return matrix_[i * n_ + j]; }

    bool contains(const Point& p) const;
    void require_member(const Point& p) const;

    double distance(const Point& x, const Point& y) const;

    /// Largest distance between two points of the space.
    double diameter() const;

    /// Projects coordinates onto the box; returns true if anything moved.
    bool clamp(std::vector<double>& coords) const;

    std::string describe() const;

private:
    MetricSpace() = default;

    SpaceKind kind_ = SpaceKind::Interval;
    Norm norm_ = Norm::L2;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::size_t n_ = 0;
    std::vector<double> matrix_;
};

/// Distance between two points. Throws DomainError when either point is
/// not in the space.
inline double distance(const MetricSpace& space, const Point& x, const Point& y) { return space.distance(x, y); }

struct MetricViolation {
    std::string axiom;  // "zero_self_distance", "symmetry", "positivity", "triangle"
    /// For triangle violations: x, via, z with d(x,z) > d(x,via) + d(via,z).
    std::vector<Point> witness;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ValidationReport {
    bool valid = true;
    bool exhaustive = false;
    std::size_t triples_checked = 0;
    std::size_t violation_count = 0;
    std::vector<MetricViolation> violations;  // first kViolationCap
};

inline constexpr double kTriangleSlack = 1e-12;

/// Checks the metric axioms. Finite spaces are checked exactly, with all
/// triples enumerated when n^3 <= sample_budget; otherwise `sample_budget`
/// seeded triples are drawn. Continuum triangle checks allow kTriangleSlack.
ValidationReport validate_metric(const MetricSpace& space, std::size_t sample_budget, std::uint64_t seed);

/// T(x) with a flag telling whether the raw value left the box.
struct MapImage {
    Point point;
    bool clamped = false;
};

/// Total self-map of a metric space: an index table on finite spaces, or
/// one expression per coordinate on boxes (variables x1..xd, or x in one
/// dimension) composed with clamping onto the box.
class SelfMap {
public:
    static SelfMap table(MetricSpace space, std::vector<std::size_t> images);
    static SelfMap expression(MetricSpace space, std::vector<expr::Expr> components);

    const MetricSpace& space() const noexcept { return space_; }
    bool is_table() const noexcept { return space_.is_finite(); }
    std::span<const std::size_t> images() const noexcept { return table_; }
    std::span<const expr::Expr> components() const noexcept { return components_; }

    /// Throws DomainError for foreign points and expr::EvalError (with the
    /// point echoed) when a component cannot be evaluated.
    MapImage image(const Point& x) const;
    Point apply(const Point& x) const { return image(x).point; }

    std::string describe() const;

private:
    explicit SelfMap(MetricSpace space) : space_(std::move(space)) {}

    MetricSpace space_;
    std::vector<std::size_t> table_;
    std::vector<expr::Expr> components_;
};

}  // namespace fixpoint

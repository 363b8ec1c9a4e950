#include "fixpoint/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixpoint/rng.hpp"

namespace fixpoint {

namespace {

constexpr std::size_t kViolationCap = 1000;

void record(ValidationReport& report, MetricViolation v) {
    report.valid = false;
    ++report.violation_count;
    if (report.violations.size() < kViolationCap) report.violations.push_back(std::move(v));
}

Point random_point(const MetricSpace& space, Rng& rng) {
    if (space.is_finite()) return Point::at_index(rng.index(space.cardinality()));
    std::vector<double> c(space.dimension());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = rng.uniform(space.lower()[i], space.upper()[i]);
    return Point::at(std::move(c));
}

void check_triple(const MetricSpace& space, const Point& x, const Point& y, const Point& z, double slack,
                  ValidationReport& report) {
    const double direct = space.distance(x, z);
    const double detour = space.distance(x, y) + space.distance(y, z);
    if (direct > detour + slack) record(report, {"triangle", {x, y, z}, direct, detour});
}

void check_pair(const MetricSpace& space, const Point& x, const Point& y, ValidationReport& report) {
    const double dxy = space.distance(x, y);
    const double dyx = space.distance(y, x);
    if (dxy != dyx) record(report, {"symmetry", {x, y}, dxy, dyx});
    if (!(x == y) && !(dxy > 0.0)) record(report, {"positivity", {x, y}, dxy, 0.0});
}

}  // namespace

std::string to_string(const Point& p) {
    if (p.is_indexed()) return std::to_string(p.index);
    std::ostringstream os;
    os.precision(17);
    if (p.coords.size() == 1) {
        os << p.coords[0];
        return os.str();
    }
    os << '(';
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) os << ", ";
        os << p.coords[i];
    }
    os << ')';
    return os.str();
}

MetricSpace MetricSpace::interval(double lower, double upper) { return box({lower}, {upper}, Norm::L2); }

MetricSpace MetricSpace::box(std::vector<double> lower, std::vector<double> upper, Norm norm) {
    if (lower.empty() || lower.size() != upper.size()) {
        throw std::invalid_argument("box bounds must be nonempty and of equal dimension");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
            throw std::invalid_argument("box bounds must be finite with lower < upper in dimension " +
                                        std::to_string(i));
        }
    }
    MetricSpace s;
    s.kind_ = lower.size() == 1 ? SpaceKind::Interval : SpaceKind::Box;
    s.norm_ = norm;
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
}

MetricSpace MetricSpace::finite(std::vector<std::vector<double>> matrix) {
    const std::size_t n = matrix.size();
    if (n == 0) throw std::invalid_argument("finite space needs at least one point");
    MetricSpace s;
    s.kind_ = SpaceKind::Finite;
    s.n_ = n;
    s.matrix_.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n) {
            throw std::invalid_argument("distance matrix row " + std::to_string(i) + " has " +
                                        std::to_string(matrix[i].size()) + " entries, expected " +
                                        std::to_string(n));
        }
        for (double v : matrix[i]) {
            if (!std::isfinite(v)) throw std::invalid_argument("distance matrix entries must be finite");
            s.matrix_.push_back(v);
        }
    }
    return s;
}

bool MetricSpace::contains(const Point& p) const {
    if (is_finite()) return p.is_indexed() && p.index < n_;
    if (p.coords.size() != dimension()) return false;
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        const double c = p.coords[i];
        if (!std::isfinite(c) || c < lower_[i] || c > upper_[i]) return false;
    }
    return true;
}

void MetricSpace::require_member(const Point& p) const {
    if (!contains(p)) throw DomainError("point " + to_string(p) + " is not in " + describe());
}

double MetricSpace::distance(const Point& x, const Point& y) const {
    require_member(x);
    require_member(y);
    if (is_finite()) return matrix_entry(x.index, y.index);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
        const double diff = std::abs(x.coords[i] - y.coords[i]);
        switch (norm_) {
            case Norm::L1:
                acc += diff;
                break;
            case Norm::L2:
                acc += diff * diff;
                break;
            case Norm::LInf:
                acc = std::max(acc, diff);
                break;
        }
    }
    if (norm_ == Norm::L2) return dimension() == 1 ? std::abs(x.coords[0] - y.coords[0]) : std::sqrt(acc);
    return acc;
}

double MetricSpace::diameter() const {
    if (is_finite()) return *std::max_element(matrix_.begin(), matrix_.end());
    return distance(Point::at(lower_), Point::at(upper_));
}

bool MetricSpace::clamp(std::vector<double>& coords) const {
    bool moved = false;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double c = std::clamp(coords[i], lower_[i], upper_[i]);
        if (c != coords[i]) {
            coords[i] = c;
            moved = true;
        }
    }
    return moved;
}

std::string MetricSpace::describe() const {
    if (is_finite()) return "finite space with " + std::to_string(n_) + " points";
    std::ostringstream os;
    os.precision(17);
    os << (kind_ == SpaceKind::Interval ? "interval " : "box ");
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (i) os << " x ";
        os << '[' << lower_[i] << ", " << upper_[i] << ']';
    }
    return os.str();
}

ValidationReport validate_metric(const MetricSpace& space, std::size_t sample_budget, std::uint64_t seed) {
    if (sample_budget == 0) throw std::invalid_argument("sample_budget must be at least 1");
    ValidationReport report;
    Rng rng(seed);

    if (space.is_finite()) {
        const std::size_t n = space.cardinality();
        for (std::size_t i = 0; i < n; ++i) {
            const double dii = space.matrix_entry(i, i);
            if (dii != 0.0) record(report, {"zero_self_distance", {Point::at_index(i)}, dii, 0.0});
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) check_pair(space, Point::at_index(i), Point::at_index(j), report);
        }
        const double triples = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
        if (triples <= static_cast<double>(sample_budget)) {
            report.exhaustive = true;
            for (std::size_t x = 0; x < n; ++x) {
                for (std::size_t z = 0; z < n; ++z) {
                    for (std::size_t y = 0; y < n; ++y) {
                        check_triple(space, Point::at_index(x), Point::at_index(y), Point::at_index(z), 0.0, report);
                    }
                }
            }
            report.triples_checked = n * n * n;
        } else {
            for (std::size_t s = 0; s < sample_budget; ++s) {
                const Point x = random_point(space, rng);
                const Point y = random_point(space, rng);
                const Point z = random_point(space, rng);
                check_triple(space, x, y, z, 0.0, report);
            }
            report.triples_checked = sample_budget;
        }
        return report;
    }

    for (std::size_t s = 0; s < sample_budget; ++s) {
        const Point x = random_point(space, rng);
        const Point y = random_point(space, rng);
        const Point z = random_point(space, rng);
        const double dxx = space.distance(x, x);
        if (dxx != 0.0) record(report, {"zero_self_distance", {x}, dxx, 0.0});
        check_pair(space, x, y, report);
        check_triple(space, x, y, z, kTriangleSlack, report);
    }
    report.triples_checked = sample_budget;
    return report;
}

SelfMap SelfMap::table(MetricSpace space, std::vector<std::size_t> images) {
    if (!space.is_finite()) throw std::invalid_argument("table maps need a finite space");
    if (images.size() != space.cardinality()) {
        throw std::invalid_argument("map table has " + std::to_string(images.size()) + " entries, space has " +
                                    std::to_string(space.cardinality()) + " points");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i] >= space.cardinality()) {
            throw DomainError("map table sends " + std::to_string(i) + " to " + std::to_string(images[i]) +
                              ", outside the space");
        }
    }
    SelfMap m(std::move(space));
    m.table_ = std::move(images);
    return m;
}

SelfMap SelfMap::expression(MetricSpace space, std::vector<expr::Expr> components) {
    if (space.is_finite()) throw std::invalid_argument("expression maps need an interval or box space");
    if (components.size() != space.dimension()) {
        throw std::invalid_argument("map has " + std::to_string(components.size()) + " components, space has dimension " +
                                    std::to_string(space.dimension()));
    }
    for (const auto& c : components) {
        if (c.min_arity() > space.dimension()) throw std::invalid_argument("map component references a missing coordinate");
    }
    SelfMap m(std::move(space));
    m.components_ = std::move(components);
    return m;
}

MapImage SelfMap::image(const Point& x) const {
    space_.require_member(x);
    if (is_table()) return {Point::at_index(table_[x.index]), false};
    std::vector<double> out(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
        try {
            out[i] = components_[i].evaluate(x.coords);
        } catch (const expr::EvalError& e) {
            throw expr::EvalError(std::string(e.what()) + " at point " + to_string(x));
        }
    }
    const bool clamped = space_.clamp(out);
    return {Point::at(std::move(out)), clamped};
}

std::string SelfMap::describe() const {
    if (is_table()) {
        std::string s = "table [";
        for (std::size_t i = 0; i < table_.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(table_[i]);
        }
        return s + "]";
    }
    const bool single = components_.size() == 1;
    std::string s;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) s += "; ";
        s += expr::to_string(components_[i], "x", single);
    }
    return s;
}

}  // namespace fixpoint

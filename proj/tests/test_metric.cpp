#include <gtest/gtest.h>

#include <cmath>

#include "fixpoint/metric.hpp"
#include "fixpoint/rng.hpp"

namespace fixpoint {
namespace {

MetricSpace path4() { return MetricSpace::finite({{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}}); }

TEST(MetricSpace, IntervalDistance) {
    const auto s = MetricSpace::interval(0.0, 1.0);
    EXPECT_DOUBLE_EQ(s.distance(Point::at(0.25), Point::at(1.0)), 0.75);
    EXPECT_DOUBLE_EQ(s.diameter(), 1.0);
    EXPECT_THROW(s.distance(Point::at(1.5), Point::at(0.0)), DomainError);
    EXPECT_THROW(MetricSpace::interval(1.0, 0.0), std::invalid_argument);
}

TEST(MetricSpace, BoxNorms) {
    const std::vector<double> lo{0, 0}, hi{3, 4};
    const Point a = Point::at({0.0, 0.0});
    const Point b = Point::at({3.0, 4.0});
    EXPECT_DOUBLE_EQ(MetricSpace::box(lo, hi, Norm::L2).distance(a, b), 5.0);
    EXPECT_DOUBLE_EQ(MetricSpace::box(lo, hi, Norm::L1).distance(a, b), 7.0);
    EXPECT_DOUBLE_EQ(MetricSpace::box(lo, hi, Norm::LInf).distance(a, b), 4.0);
    EXPECT_DOUBLE_EQ(MetricSpace::box(lo, hi, Norm::L2).diameter(), 5.0);
    EXPECT_THROW(MetricSpace::box(lo, hi).distance(a, Point::at(1.0)), DomainError);
}

TEST(MetricSpace, FiniteSpace) {
    const auto s = path4();
    EXPECT_EQ(s.cardinality(), 4u);
    EXPECT_DOUBLE_EQ(s.distance(Point::at_index(0), Point::at_index(3)), 3.0);
    EXPECT_DOUBLE_EQ(s.diameter(), 3.0);
    EXPECT_THROW(s.distance(Point::at_index(4), Point::at_index(0)), DomainError);
    EXPECT_THROW(MetricSpace::finite({{0, 1}, {1}}), std::invalid_argument);
}

TEST(MetricSpace, Clamp) {
    const auto s = MetricSpace::box({0, 0}, {1, 1});
    std::vector<double> c{1.5, 0.5};
    EXPECT_TRUE(s.clamp(c));
    EXPECT_EQ(c, (std::vector<double>{1.0, 0.5}));
    EXPECT_FALSE(s.clamp(c));
}

TEST(ValidateMetric, AcceptsPathMetric) {
    const auto r = validate_metric(path4(), 1000, 0);
    EXPECT_TRUE(r.valid);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.triples_checked, 64u);
    EXPECT_EQ(r.violation_count, 0u);
}

TEST(ValidateMetric, TriangleWitnessRecomputes) {
    // d(0,2) = 5 > d(0,1) + d(1,2) = 2.
    const auto s = MetricSpace::finite({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
    const auto r = validate_metric(s, 1000, 0);
    EXPECT_FALSE(r.valid);
    ASSERT_FALSE(r.violations.empty());
    for (const auto& v : r.violations) {
        ASSERT_EQ(v.axiom, "triangle");
        ASSERT_EQ(v.witness.size(), 3u);
        const double lhs = s.distance(v.witness[0], v.witness[2]);
        const double rhs = s.distance(v.witness[0], v.witness[1]) + s.distance(v.witness[1], v.witness[2]);
        EXPECT_DOUBLE_EQ(lhs, v.lhs);
        EXPECT_DOUBLE_EQ(rhs, v.rhs);
        EXPECT_GT(lhs, rhs);
    }
}

TEST(ValidateMetric, OtherAxioms) {
    const auto asym = validate_metric(MetricSpace::finite({{0, 1}, {2, 0}}), 1000, 0);
    EXPECT_FALSE(asym.valid);
    bool saw_symmetry = false;
    for (const auto& v : asym.violations) saw_symmetry = saw_symmetry || v.axiom == "symmetry";
    EXPECT_TRUE(saw_symmetry);

    const auto diag = validate_metric(MetricSpace::finite({{1, 1}, {1, 0}}), 1000, 0);
    EXPECT_FALSE(diag.valid);
    EXPECT_EQ(diag.violations.front().axiom, "zero_self_distance");

    const auto pos = validate_metric(MetricSpace::finite({{0, 0}, {0, 0}}), 1000, 0);
    EXPECT_FALSE(pos.valid);
    EXPECT_EQ(pos.violations.front().axiom, "positivity");
}

TEST(ValidateMetric, SampledFiniteIsDeterministic) {
    std::vector<std::vector<double>> m(30, std::vector<double>(30));
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 30; ++j) m[i][j] = std::abs(double(i) - double(j));
    }
    m[0][29] = m[29][0] = 100.0;
    const auto s = MetricSpace::finite(m);
    const auto a = validate_metric(s, 500, 9);
    const auto b = validate_metric(s, 500, 9);
    EXPECT_FALSE(a.exhaustive);
    EXPECT_EQ(a.triples_checked, 500u);
    EXPECT_EQ(a.violation_count, b.violation_count);
    EXPECT_TRUE(validate_metric(s, 27000, 9).exhaustive);
    EXPECT_FALSE(validate_metric(s, 27000, 9).valid);
}

TEST(ValidateMetric, ContinuumSpacesPass) {
    EXPECT_TRUE(validate_metric(MetricSpace::interval(-2, 3), 5000, 1).valid);
    EXPECT_TRUE(validate_metric(MetricSpace::box({0, 0, 0}, {1, 2, 3}, Norm::L1), 5000, 1).valid);
}

// Property: on random point sets in a box, every norm satisfies the axioms
// when the distances are tabulated into a finite space.
TEST(MetricProperty, TabulatedNormsAreMetrics) {
    Rng rng(5);
    for (Norm norm : {Norm::L1, Norm::L2, Norm::LInf}) {
        const auto box = MetricSpace::box({0, 0}, {1, 1}, norm);
        std::vector<Point> pts;
        for (int i = 0; i < 12; ++i) pts.push_back(Point::at({rng.unit(), rng.unit()}));
        std::vector<std::vector<double>> m(pts.size(), std::vector<double>(pts.size()));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = 0; j < pts.size(); ++j) m[i][j] = box.distance(pts[i], pts[j]);
        }
        // Exact triangle checks on floating-point sums can miss by an ulp;
        // round to a coarse lattice that keeps the inequality exact.
        for (auto& row : m) {
            for (auto& v : row) v = std::ceil(v * 1024.0) / 1024.0;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) m[i][i] = 0.0;
        const auto r = validate_metric(MetricSpace::finite(m), 100000, 0);
        EXPECT_EQ(r.violation_count, 0u);
    }
}

TEST(SelfMap, TableAndExpression) {
    const auto t = SelfMap::table(path4(), {0, 3, 0, 0});
    EXPECT_EQ(t.apply(Point::at_index(1)), Point::at_index(3));
    EXPECT_THROW(SelfMap::table(path4(), {0, 4, 0, 0}), DomainError);
    EXPECT_THROW(SelfMap::table(path4(), {0, 1}), std::invalid_argument);

    const auto e = SelfMap::expression(MetricSpace::interval(0, 1), {expr::parse("x/2", 1)});
    EXPECT_DOUBLE_EQ(e.apply(Point::at(0.5)).coords[0], 0.25);
}

TEST(SelfMap, ClampingIsFlagged) {
    const auto e = SelfMap::expression(MetricSpace::interval(0, 1), {expr::parse("2*x", 1)});
    const MapImage img = e.image(Point::at(0.75));
    EXPECT_TRUE(img.clamped);
    EXPECT_DOUBLE_EQ(img.point.coords[0], 1.0);
    EXPECT_FALSE(e.image(Point::at(0.25)).clamped);
}

TEST(SelfMap, EvaluationErrorsNameThePoint) {
    const auto e = SelfMap::expression(MetricSpace::interval(0, 1), {expr::parse("1/x", 1)});
    try {
        e.apply(Point::at(0.0));
        FAIL() << "expected EvalError";
    } catch (const expr::EvalError& err) {
        EXPECT_NE(std::string(err.what()).find("at point"), std::string::npos) << err.what();
    }
}

TEST(SelfMap, BoxComponents) {
    const auto box = MetricSpace::box({0, 0}, {1, 1});
    const auto m = SelfMap::expression(box, {expr::parse("x2", 2), expr::parse("x1/2", 2)});
    EXPECT_EQ(m.apply(Point::at({0.5, 1.0})), Point::at({1.0, 0.25}));
    EXPECT_THROW(SelfMap::expression(box, {expr::parse("x1", 2)}), std::invalid_argument);
}

}  // namespace
}  // namespace fixpoint

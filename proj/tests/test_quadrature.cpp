#include <gtest/gtest.h>

#include <cmath>

#include "fixpoint/function_classes.hpp"
#include "fixpoint/metric.hpp"
#include "fixpoint/quadrature.hpp"
#include "fixpoint/rng.hpp"

namespace fixpoint {
namespace {

TEST(CumulativeIntegral, LinearIntegrandExactAtNodes) {
    const CumulativeIntegral F([](double t) { return 2.0 * t; }, 2.0, 200);
    for (std::size_t i = 0; i <= 200; ++i) {
        const double t = F.node(i);
        EXPECT_NEAR(F(t), t * t, 1e-13);
    }
    EXPECT_EQ(F(0.0), 0.0);
}

TEST(CumulativeIntegral, TrapezoidErrorBound) {
    // |error| <= t h^2 max|f''| / 12 for the composite rule at nodes, plus
    // the interpolation error between nodes, h^2 max|F''| / 8.
    const std::size_t n = 1000;
    const CumulativeIntegral F([](double t) { return std::cos(t); }, 1.0, n);
    const double h = 1.0 / n;
    const double bound = h * h / 12.0 + h * h / 8.0;
    for (int i = 0; i <= 97; ++i) {
        const double t = i / 97.0;
        EXPECT_NEAR(F(t), std::sin(t), bound) << t;
    }
}

TEST(CumulativeIntegral, RejectsBadInput) {
    EXPECT_THROW(CumulativeIntegral([](double) { return 1.0; }, 0.0, 10), std::invalid_argument);
    EXPECT_THROW(CumulativeIntegral([](double) { return 1.0; }, 1.0, 1), std::invalid_argument);
    try {
        CumulativeIntegral([](double t) { return t - 0.5; }, 1.0, 10, "t - 0.5");
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("t - 0.5"), std::string::npos) << e.what();
    }
    const CumulativeIntegral F([](double) { return 1.0; }, 1.0, 10);
    EXPECT_THROW(F(1.5), DomainError);
    EXPECT_THROW(F(-0.1), DomainError);
}

// Property: F is non-decreasing at arbitrary (not just node) arguments,
// including integrands that vanish on stretches.
TEST(CumulativeIntegralProperty, MonotoneEverywhere) {
    const CumulativeIntegral F([](double t) { return std::max(0.0, std::sin(20.0 * t)); }, 3.0, 777);
    Rng rng(3);
    std::vector<double> ts(5000);
    for (auto& t : ts) t = rng.uniform(0.0, 3.0);
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 1; i < ts.size(); ++i) ASSERT_LE(F(ts[i - 1]), F(ts[i])) << ts[i - 1] << " " << ts[i];
}

TEST(IntegralAltering, WrapsIntegral) {
    const auto psi = integral_altering(expr::parse("2*t", 1), 2.0, 9900);
    EXPECT_TRUE(psi.is_integral());
    EXPECT_DOUBLE_EQ(psi.domain_max(), 2.0);
    EXPECT_NEAR(psi(1.0), 1.0, 1e-12);
    EXPECT_THROW(psi(2.5), DomainError);
}

}  // namespace
}  // namespace fixpoint

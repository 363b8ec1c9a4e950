#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixpoint/expr.hpp"
#include "fixpoint/rng.hpp"

namespace fixpoint::expr {
namespace {

double eval(std::string_view src, std::vector<double> args) {
    return parse(src, args.size()).evaluate(args);
}

TEST(ExprParse, Precedence) {
    EXPECT_DOUBLE_EQ(eval("1 + 2*3", {}), 7.0);
    EXPECT_DOUBLE_EQ(eval("(1 + 2)*3", {}), 9.0);
    EXPECT_DOUBLE_EQ(eval("8/4/2", {}), 1.0);
    EXPECT_DOUBLE_EQ(eval("8 - 4 - 2", {}), 2.0);
    EXPECT_DOUBLE_EQ(eval("2^3^2", {}), 512.0);
    EXPECT_DOUBLE_EQ(eval("-2^2", {}), -4.0);
    EXPECT_DOUBLE_EQ(eval("2^-1", {}), 0.5);
    EXPECT_DOUBLE_EQ(eval("-t1*t2", {3.0, 2.0}), -6.0);
}

TEST(ExprParse, Functions) {
    EXPECT_DOUBLE_EQ(eval("max(t1, t2, t3, (t4 + t5)/2)", {1, 2, 0.5, 4, 6}), 5.0);
    EXPECT_DOUBLE_EQ(eval("min(3)", {}), 3.0);
    EXPECT_DOUBLE_EQ(eval("abs(-2) + sqrt(9) + exp(0) + log(1)", {}), 6.0);
    EXPECT_DOUBLE_EQ(eval("clamp0(x - 1)", {0.25}), 0.0);
    EXPECT_DOUBLE_EQ(eval("clamp0(x - 1)", {3.0}), 2.0);
    EXPECT_NEAR(eval("cos(x) + sin(x)", {0.5}), std::cos(0.5) + std::sin(0.5), 1e-15);
}

TEST(ExprParse, Variables) {
    EXPECT_DOUBLE_EQ(eval("x", {4.0}), 4.0);
    EXPECT_DOUBLE_EQ(eval("t", {4.0}), 4.0);
    EXPECT_DOUBLE_EQ(eval("x1 + t2", {1.0, 2.0}), 3.0);
    EXPECT_EQ(parse("t1", 3).min_arity(), 1u);
    EXPECT_EQ(parse("t3", 3).min_arity(), 3u);
    EXPECT_EQ(parse("2", 0).min_arity(), 0u);
}

TEST(ExprParse, NumberForms) {
    EXPECT_DOUBLE_EQ(eval("1e-3", {}), 1e-3);
    EXPECT_DOUBLE_EQ(eval(".5", {}), 0.5);
    EXPECT_DOUBLE_EQ(eval("2.5E2", {}), 250.0);
}

TEST(ExprParse, ErrorsCarryPosition) {
    try {
        parse("1 + ", 0);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 4u);
        EXPECT_NE(std::string(e.what()).find("end of input"), std::string::npos);
    }
    try {
        parse("t1 + foo(t1)", 1);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 5u);
        EXPECT_NE(std::string(e.what()).find("unknown identifier 'foo'"), std::string::npos);
    }
}

TEST(ExprParse, ArityViolations) {
    EXPECT_THROW(parse("t3", 2), ParseError);
    EXPECT_THROW(parse("x", 2), ParseError);
    EXPECT_THROW(parse("t0", 2), ParseError);
    EXPECT_THROW(parse("abs(1, 2)", 0), ParseError);
    EXPECT_THROW(parse("max()", 0), ParseError);
    EXPECT_THROW(parse("(1", 0), ParseError);
    EXPECT_THROW(parse("1)", 0), ParseError);
    EXPECT_THROW(parse("", 0), ParseError);
    EXPECT_THROW(parse("1 $ 2", 0), ParseError);
}

TEST(ExprEval, PartialPrimitivesRaise) {
    EXPECT_THROW(eval("1/x", {0.0}), EvalError);
    EXPECT_THROW(eval("log(x)", {0.0}), EvalError);
    EXPECT_THROW(eval("log(x)", {-1.0}), EvalError);
    EXPECT_THROW(eval("sqrt(x)", {-1.0}), EvalError);
    EXPECT_THROW(eval("x^-1", {0.0}), EvalError);
    EXPECT_THROW(eval("x^0.5", {-4.0}), EvalError);
    EXPECT_THROW(eval("exp(x)", {1000.0}), EvalError);
    try {
        eval("1 + 1/(x - 2)", {2.0});
        FAIL() << "expected EvalError";
    } catch (const EvalError& e) {
        EXPECT_NE(std::string(e.what()).find("division by zero in '1/(t1 - 2)'"), std::string::npos) << e.what();
    }
}

TEST(ExprPrint, Canonical) {
    EXPECT_EQ(to_string(parse("(t1 + t2) * t3", 3)), "(t1 + t2)*t3");
    EXPECT_EQ(to_string(parse("t1 - (t2 - t3)", 3)), "t1 - (t2 - t3)");
    EXPECT_EQ(to_string(parse("(t1 - t2) - t3", 3)), "t1 - t2 - t3");
    EXPECT_EQ(to_string(parse("(2^3)^2", 0)), "(2^3)^2");
    EXPECT_EQ(to_string(parse("2^(3^2)", 0)), "2^3^2");
    EXPECT_EQ(to_string(parse("(-2)^2", 0)), "(-2)^2");
    EXPECT_EQ(to_string(parse("x/2", 1), "x", true), "x/2");
    EXPECT_EQ(to_string(parse("0.1", 0)), "0.1");
}

TEST(ExprSubstitute, ComposesFunctions) {
    const Expr psi = parse("t^2", 1);
    const Expr arg = parse("t1 + t2", 2);
    const Expr composed = psi.substitute(std::span<const Expr>(&arg, 1));
    EXPECT_EQ(to_string(composed), "(t1 + t2)^2");
    const std::vector<double> v{1.0, 2.0};
    EXPECT_DOUBLE_EQ(composed.evaluate(v), 9.0);
}

/// Random well-formed trees over `arity` variables.
Expr random_expr(Rng& rng, std::size_t arity, int depth) {
    if (depth == 0 || rng.chance(0.25)) {
        if (arity > 0 && rng.chance(0.5)) return Expr::variable(rng.index(arity));
        const double v = std::round(rng.uniform(-50.0, 50.0) * 8.0) / 8.0;
        return Expr::literal(v);
    }
    switch (rng.index(6)) {
        case 0:
            return Expr::unary(Op::Neg, random_expr(rng, arity, depth - 1));
        case 1: {
            static constexpr Op kBinary[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Pow};
            return Expr::binary(kBinary[rng.index(5)], random_expr(rng, arity, depth - 1),
                                random_expr(rng, arity, depth - 1));
        }
        case 2: {
            std::vector<Expr> kids;
            const std::size_t n = 1 + rng.index(3);
            for (std::size_t i = 0; i < n; ++i) kids.push_back(random_expr(rng, arity, depth - 1));
            return Expr::nary(rng.chance(0.5) ? Op::Min : Op::Max, std::move(kids));
        }
        case 3: {
            static constexpr Op kUnary[] = {Op::Abs, Op::Sqrt, Op::Exp, Op::Log, Op::Cos, Op::Sin, Op::Clamp0};
            return Expr::unary(kUnary[rng.index(7)], random_expr(rng, arity, depth - 1));
        }
        default:
            return Expr::binary(rng.chance(0.5) ? Op::Add : Op::Mul, random_expr(rng, arity, depth - 1),
                                random_expr(rng, arity, depth - 1));
    }
}

TEST(ExprProperty, PrintParseRoundTrip) {
    Rng rng(20240601);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t arity = rng.index(4);
        const Expr e = random_expr(rng, arity, 5);
        const std::string text = to_string(e);
        const Expr back = parse(text, arity);
        ASSERT_TRUE(back == e) << text << " reparsed as " << to_string(back);
        ASSERT_EQ(to_string(back), text);
    }
}

TEST(ExprProperty, SingleVariableRoundTrip) {
    Rng rng(77);
    for (int i = 0; i < 500; ++i) {
        const Expr e = random_expr(rng, 1, 4);
        const std::string text = to_string(e, "x", true);
        ASSERT_TRUE(parse(text, 1) == e) << text;
    }
}

}  // namespace
}  // namespace fixpoint::expr

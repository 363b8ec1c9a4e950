#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fixpoint::expr {

/// Syntax error or arity violation raised by parse().
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::invalid_argument(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Raised when a partial primitive is hit (1/0, log(-1), sqrt(-1)) or a
/// node produces a non-finite value.
class EvalError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Op {
    Literal,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
    Abs,
    Sqrt,
    Exp,
    Log,
    Cos,
    Sin,
    Clamp0,
};

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    static Expr literal(double value);
    static Expr variable(std::size_t index);
    static Expr unary(Op op, Expr operand);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr nary(Op op, std::vector<Expr> operands);

    Op op() const noexcept;
    double value() const noexcept;
    std::size_t variable_index() const noexcept;
    std::span<const Expr> children() const noexcept;

    /// One past the highest variable index referenced (0 for constants).
    std::size_t min_arity() const;

    double evaluate(std::span<const double> args) const;
    double operator()(double x) const { return evaluate(std::span<const double>(&x, 1)); }

    /// Replaces variable i with replacements[i].
    Expr substitute(std::span<const Expr> replacements) const;

    friend bool operator==(const Expr& a, const Expr& b);

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parses `source` with variables limited to `declared_arity`.
///
/// Accepted variables are `t1..tk` and `x1..xk`; when the arity is one,
/// `x` and `t` also name the single argument. Precedence from loosest to
/// tightest is `+ -`, `* /`, unary sign, `^`. Binary operators associate
/// left except `^`, which associates right. `min` and `max` take any
/// positive number of arguments.
Expr parse(std::string_view source, std::size_t declared_arity);

/// Canonical text form; parse(to_string(e), k) == e.
///
/// Variables print as `<prefix><i+1>`, or as the bare prefix when
/// `single` is set (only variable 0 may then occur).
std::string to_string(const Expr& e, std::string_view prefix = "t", bool single = false);

}  // namespace fixpoint::expr

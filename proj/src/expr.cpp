#include "fixpoint/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <optional>

namespace fixpoint::expr {

struct Expr::Node {
    Op op = Op::Literal;
    double value = 0.0;
    std::size_t index = 0;
    std::vector<Expr> children;
};

namespace {

struct FunctionInfo {
    std::string_view name;
    Op op;
    bool variadic;
};

constexpr std::array<FunctionInfo, 9> kFunctions{{
    {"min", Op::Min, true},
    {"max", Op::Max, true},
    {"abs", Op::Abs, false},
    {"sqrt", Op::Sqrt, false},
    {"exp", Op::Exp, false},
    {"log", Op::Log, false},
    {"cos", Op::Cos, false},
    {"sin", Op::Sin, false},
    {"clamp0", Op::Clamp0, false},
}};

std::string_view function_name(Op op) {
    for (const auto& f : kFunctions) {
        if (f.op == op) return f.name;
    }
    return "?";
}

bool is_unary_function(Op op) {
    switch (op) {
        case Op::Abs:
        case Op::Sqrt:
        case Op::Exp:
        case Op::Log:
        case Op::Cos:
        case Op::Sin:
        case Op::Clamp0:
            return true;
        default:
            return false;
    }
}

bool is_binary(Op op) {
    return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

// Binding strength used by the printer; mirrors the parser's grammar levels.
int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub:
            return 1;
        case Op::Mul:
        case Op::Div:
            return 2;
        case Op::Neg:
            return 3;
        case Op::Pow:
            return 4;
        default:
            return 5;
    }
}

class Printer {
public:
    Printer(std::string_view prefix, bool single) : prefix_(prefix), single_(single) {}

    void print(const Expr& e, std::string& out) const {
        switch (e.op()) {
            case Op::Literal:
                out += format_number(e.value());
                return;
            case Op::Variable:
                out += prefix_;
                if (!single_ || e.variable_index() != 0) out += std::to_string(e.variable_index() + 1);
                return;
            case Op::Neg:
                out += '-';
                wrap(e.children()[0], precedence(e.children()[0]) < 3, out);
                return;
            case Op::Pow:
                wrap(e.children()[0], precedence(e.children()[0]) <= 4, out);
                out += '^';
                wrap(e.children()[1], precedence(e.children()[1]) < 3, out);
                return;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div: {
                const int p = precedence(e);
                wrap(e.children()[0], precedence(e.children()[0]) < p, out);
                out += binary_symbol(e.op());
                wrap(e.children()[1], precedence(e.children()[1]) <= p, out);
                return;
            }
            default: {
                out += function_name(e.op());
                out += '(';
                bool first = true;
                for (const auto& c : e.children()) {
                    if (!first) out += ", ";
                    first = false;
                    print(c, out);
                }
                out += ')';
                return;
            }
        }
    }

private:
    static std::string_view binary_symbol(Op op) {
        switch (op) {
            case Op::Add:
                return " + ";
            case Op::Sub:
                return " - ";
            case Op::Mul:
                return "*";
            default:
                return "/";
        }
    }

    void wrap(const Expr& e, bool parens, std::string& out) const {
        if (parens) out += '(';
        print(e, out);
        if (parens) out += ')';
    }

    std::string_view prefix_;
    bool single_;
};

[[noreturn]] void fail_eval(const Expr& node, std::string_view what) {
    throw EvalError(std::string(what) + " in '" + to_string(node) + "'");
}

double checked(const Expr& node, double v) {
    if (!std::isfinite(v)) fail_eval(node, "non-finite result");
    return v;
}

double eval(const Expr& e, std::span<const double> args) {
    const auto kids = e.children();
    switch (e.op()) {
        case Op::Literal:
            return e.value();
        case Op::Variable:
            if (e.variable_index() >= args.size()) fail_eval(e, "missing argument");
            return args[e.variable_index()];
        case Op::Neg:
            return -eval(kids[0], args);
        case Op::Add:
            return checked(e, eval(kids[0], args) + eval(kids[1], args));
        case Op::Sub:
            return checked(e, eval(kids[0], args) - eval(kids[1], args));
        case Op::Mul:
            return checked(e, eval(kids[0], args) * eval(kids[1], args));
        case Op::Div: {
            const double num = eval(kids[0], args);
            const double den = eval(kids[1], args);
            if (den == 0.0) fail_eval(e, "division by zero");
            return checked(e, num / den);
        }
        case Op::Pow: {
            const double base = eval(kids[0], args);
            const double exponent = eval(kids[1], args);
            if (base == 0.0 && exponent < 0.0) fail_eval(e, "division by zero");
            const double r = std::pow(base, exponent);
            if (std::isnan(r)) fail_eval(e, "power of negative base with fractional exponent");
            return checked(e, r);
        }
        case Op::Min:
        case Op::Max: {
            double acc = eval(kids[0], args);
            for (std::size_t i = 1; i < kids.size(); ++i) {
                const double v = eval(kids[i], args);
                acc = e.op() == Op::Min ? std::min(acc, v) : std::max(acc, v);
            }
            return acc;
        }
        case Op::Abs:
            return std::abs(eval(kids[0], args));
        case Op::Sqrt: {
            const double v = eval(kids[0], args);
            if (v < 0.0) fail_eval(e, "sqrt of negative value");
            return std::sqrt(v);
        }
        case Op::Exp:
            return checked(e, std::exp(eval(kids[0], args)));
        case Op::Log: {
            const double v = eval(kids[0], args);
            if (v <= 0.0) fail_eval(e, "log of non-positive value");
            return std::log(v);
        }
        case Op::Cos:
            return std::cos(eval(kids[0], args));
        case Op::Sin:
            return std::sin(eval(kids[0], args));
        case Op::Clamp0:
            return std::max(0.0, eval(kids[0], args));
    }
    fail_eval(e, "unknown node");
}

class Parser {
public:
    Parser(std::string_view src, std::size_t arity) : src_(src), arity_(arity) {}

    Expr run() {
        skip_ws();
        if (at_end()) throw ParseError("empty expression", pos_);
        Expr e = parse_sum();
        skip_ws();
        if (!at_end()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (!at_end() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (at_end()) throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_sum() {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(Op::Add, lhs, parse_product());
            } else if (accept('-')) {
                lhs = Expr::binary(Op::Sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_product() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(Op::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expr::binary(Op::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::unary(Op::Neg, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return Expr::binary(Op::Pow, base, parse_unary());
        return base;
    }

    Expr parse_primary() {
        skip_ws();
        if (at_end()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (!at_end() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (at_end() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                pos_ = save;
            } else {
                digits();
            }
        }
        double value = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
            throw ParseError("malformed number '" + std::string(first, last) + "'", start);
        }
        return Expr::literal(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        for (const auto& f : kFunctions) {
            if (f.name != name) continue;
            expect('(');
            std::vector<Expr> args;
            args.push_back(parse_sum());
            while (accept(',')) args.push_back(parse_sum());
            expect(')');
            if (!f.variadic && args.size() != 1) {
                throw ParseError(std::string(name) + " takes exactly one argument", start);
            }
            return f.variadic ? Expr::nary(f.op, std::move(args)) : Expr::unary(f.op, std::move(args[0]));
        }

        if (auto index = variable_index(name, start)) return Expr::variable(*index);
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }

    std::optional<std::size_t> variable_index(std::string_view name, std::size_t start) const {
        if (name.empty() || (name[0] != 'x' && name[0] != 't')) return std::nullopt;
        if (name.size() == 1) {
            if (arity_ != 1) {
                throw ParseError("variable '" + std::string(name) + "' requires arity 1 (declared " +
                                     std::to_string(arity_) + "); use " + name[0] + "1.." + name[0] +
                                     std::to_string(arity_),
                                 start);
            }
            return 0;
        }
        std::size_t number = 0;
        auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), number);
        if (ec != std::errc() || ptr != name.data() + name.size() || name[1] == '0') return std::nullopt;
        if (number > arity_) {
            throw ParseError("variable '" + std::string(name) + "' exceeds declared arity " + std::to_string(arity_),
                             start);
        }
        return number - 1;
    }

    std::string_view src_;
    std::size_t arity_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::literal(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("expression literal must be finite");
    // Negative literals are stored as negations so the printed form parses back identically.
    if (std::signbit(value) && value != 0.0) return unary(Op::Neg, literal(-value));
    auto n = std::make_shared<Node>();
    n->op = Op::Literal;
    n->value = value == 0.0 ? 0.0 : value;
    return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index) {
    auto n = std::make_shared<Node>();
    n->op = Op::Variable;
    n->index = index;
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr operand) {
    if (op != Op::Neg && !is_unary_function(op)) throw std::invalid_argument("not a unary operator");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children.push_back(std::move(operand));
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (op == Op::Min || op == Op::Max) return nary(op, {std::move(lhs), std::move(rhs)});
    if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return Expr(std::move(n));
}

Expr Expr::nary(Op op, std::vector<Expr> operands) {
    if (op != Op::Min && op != Op::Max) throw std::invalid_argument("only min/max are n-ary");
    if (operands.empty()) throw std::invalid_argument("min/max need at least one operand");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children = std::move(operands);
    return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
std::size_t Expr::variable_index() const noexcept { return node_->index; }
std::span<const Expr> Expr::children() const noexcept { return node_->children; }

std::size_t Expr::min_arity() const {
    if (op() == Op::Variable) return variable_index() + 1;
    std::size_t arity = 0;
    for (const auto& c : children()) arity = std::max(arity, c.min_arity());
    return arity;
}

double Expr::evaluate(std::span<const double> args) const { return eval(*this, args); }

Expr Expr::substitute(std::span<const Expr> replacements) const {
    if (op() == Op::Variable) {
        if (variable_index() >= replacements.size()) throw std::invalid_argument("substitution missing a variable");
        return replacements[variable_index()];
    }
    if (children().empty()) return *this;
    auto n = std::make_shared<Node>(*node_);
    for (auto& c : n->children) c = c.substitute(replacements);
    return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op()) return false;
    if (a.op() == Op::Literal) return a.value() == b.value();
    if (a.op() == Op::Variable) return a.variable_index() == b.variable_index();
    const auto ka = a.children();
    const auto kb = b.children();
    return std::equal(ka.begin(), ka.end(), kb.begin(), kb.end());
}

Expr parse(std::string_view source, std::size_t declared_arity) { return Parser(source, declared_arity).run(); }

std::string to_string(const Expr& e, std::string_view prefix, bool single) {
    std::string out;
    Printer(prefix, single).print(e, out);
    return out;
}

}  // namespace fixpoint::expr

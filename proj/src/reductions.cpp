#include <sstream>

#include "fixpoint/conditions.hpp"

namespace fixpoint {

namespace {

using expr::Expr;
using expr::Op;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

GFn projection_g() { return GFn(Expr::variable(0)); }
GFn max_all_g() { return GFn(expr::parse("max(t1, t2, t3, t4, t5)", 5)); }
GFn max_first_two_g() { return GFn(expr::parse("max(t1, t2)", 5)); }
GFn rational_g() { return GFn(expr::parse("t2*(1 + t3)/(1 + t1)", 5)); }

/// ψ(t_{i+1}) as an expression, when ψ has one.
std::optional<Expr> psi_of(const AlteringDistance& psi, std::size_t i) {
    if (!psi.expression()) return std::nullopt;
    const Expr arg = Expr::variable(i);
    return psi.expression()->substitute(std::span<const Expr>(&arg, 1));
}

Expr h_of(const Expr& h, const Expr& arg) { return h.substitute(std::span<const Expr>(&arg, 1)); }

double eval1(const Expr& e, double t) { return e.evaluate(std::span<const double>(&t, 1)); }

std::string h_text(const Expr& h) { return "h(t) = " + expr::to_string(h, "t", true); }

/// c·ψ(t1)
ControlFn scaled_psi(const AlteringDistance& psi, double c) {
    if (auto p = psi_of(psi, 0)) return ControlFn(Expr::binary(Op::Mul, Expr::literal(c), *p), 1);
    return ControlFn(
        1, [psi, c](std::span<const double> t) { return c * psi(t[0]); }, fmt(c) + "*psi(t1)");
}

/// h(ψ(t1))
ControlFn h_after_psi(const AlteringDistance& psi, const Expr& h) {
    if (auto p = psi_of(psi, 0)) return ControlFn(h_of(h, *p), 1);
    return ControlFn(
        1, [psi, h](std::span<const double> t) { return eval1(h, psi(t[0])); }, "h(psi(t1)), " + h_text(h));
}

/// clamp0(ψ(t1) − h(t_{j+1}))
ControlFn psi_minus_h(const AlteringDistance& psi, const Expr& h, std::size_t arity, std::size_t h_var) {
    if (auto p = psi_of(psi, 0)) {
        return ControlFn(Expr::unary(Op::Clamp0, Expr::binary(Op::Sub, *p, h_of(h, Expr::variable(h_var)))), arity);
    }
    return ControlFn(
        arity, [psi, h, h_var](std::span<const double> t) { return psi(t[0]) - eval1(h, t[h_var]); },
        "clamp0(psi(t1) - h(t" + std::to_string(h_var + 1) + ")), " + h_text(h));
}

/// a·ψ(t1) + b·ψ(t2)
ControlFn weighted_psi_pair(const AlteringDistance& psi, double a, double b) {
    auto p1 = psi_of(psi, 0);
    auto p2 = psi_of(psi, 1);
    if (p1 && p2) {
        return ControlFn(Expr::binary(Op::Add, Expr::binary(Op::Mul, Expr::literal(a), *p1),
                                      Expr::binary(Op::Mul, Expr::literal(b), *p2)),
                         2);
    }
    return ControlFn(
        2, [psi, a, b](std::span<const double> t) { return a * psi(t[0]) + b * psi(t[1]); },
        fmt(a) + "*psi(t1) + " + fmt(b) + "*psi(t2)");
}

}  // namespace

GeneralCondition reduce_condition(const SpecialCondition& cond, double alpha) {
    const AlteringDistance& psi = cond.psi();
    switch (cond.family()) {
        case Family::Banach:
            return {psi, scaled_psi(psi, cond.constant()), {projection_g()}, alpha};
        case Family::Branciari:
        case Family::Khan:
            return {psi, scaled_psi(psi, cond.constant()), {projection_g()}, alpha};
        case Family::Rhoades:
            return {psi, scaled_psi(psi, cond.constant()), {max_with_mean_g()}, alpha};
        case Family::Djoudi:
        case Family::HPsiMax:
            return {psi, h_after_psi(psi, *cond.h()), {max_all_g()}, alpha};
        case Family::Dutta:
            return {psi, psi_minus_h(psi, *cond.h(), 2, 1), {projection_g(), projection_g()}, alpha};
        case Family::Doric:
            return {psi, psi_minus_h(psi, *cond.h(), 1, 0), {max_with_mean_g()}, alpha};
        case Family::Choudhury:
            return {psi, psi_minus_h(psi, *cond.h(), 2, 1), {max_with_mean_g(), max_first_two_g()}, alpha};
        case Family::Morales:
            return {psi, weighted_psi_pair(psi, cond.a(), cond.b()), {projection_g(), rational_g()}, alpha};
    }
    throw std::logic_error("unknown family");
}

Reduction reduce_to_general(const SpecialCondition& cond, const InvariantBudget& budget, double alpha) {
    Reduction r{reduce_condition(cond, alpha), {}, {}, false};
    r.dominance = verify_dominance({r.general.psi, r.general.phi},
                                   {budget.dominance_samples, budget.seed, 1e-12, budget.dominance_range});
    bool ok = r.dominance.passed;
    for (const auto& g : r.general.gs) {
        r.g_membership.push_back(verify_g_membership(g, budget.g_samples, budget.seed));
        ok = ok && r.g_membership.back().passed;
    }
    r.invariants_hold = ok;
    return r;
}

}  // namespace fixpoint

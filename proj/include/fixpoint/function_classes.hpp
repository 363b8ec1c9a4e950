#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fixpoint/expr.hpp"
#include "fixpoint/quadrature.hpp"

namespace fixpoint {

/// The 5-tuple (d(x,y), d(y,Ty), d(x,Tx), d(x,Ty), d(y,Tx)), always in
/// this order.
using MVector = std::array<double, 5>;

/// Candidate altering distance ψ: [0,∞) → [0,∞), either a unary
/// expression or a cumulative integral of a nonnegative integrand.
class AlteringDistance {
public:
    explicit AlteringDistance(expr::Expr rule);
    explicit AlteringDistance(std::shared_ptr<const CumulativeIntegral> integral);

    static AlteringDistance identity();

    double operator()(double t) const;

    /// Upper end of the evaluation domain (t_max for integrals).
    double domain_max() const noexcept;
    bool is_integral() const noexcept { return integral_ != nullptr; }

    const std::optional<expr::Expr>& expression() const noexcept { return rule_; }
    const std::shared_ptr<const CumulativeIntegral>& integral() const noexcept { return integral_; }

    std::string describe() const;

private:
    std::optional<expr::Expr> rule_;
    std::shared_ptr<const CumulativeIntegral> integral_;
};

/// ψ(t) = ∫₀ᵗ integrand on [0, t_max] with `subdivisions` trapezoid cells.
AlteringDistance integral_altering(const expr::Expr& integrand, double t_max, std::size_t subdivisions);

/// Candidate control function φ: [0,∞)^k → [0,∞).
///
/// Outputs are clamped at zero. Reductions such as ψ(t₁) − h(t₂) can go
/// negative, and clamping keeps the codomain without weakening φ < ψ(max).
class ControlFn {
public:
    using Rule = std::function<double(std::span<const double>)>;

    ControlFn(expr::Expr rule, std::size_t arity);
    ControlFn(std::size_t arity, Rule rule, std::string text);

    std::size_t arity() const noexcept { return arity_; }
    double operator()(std::span<const double> t) const;
    /// Value before clamping.
    double raw(std::span<const double> t) const;

    const std::optional<expr::Expr>& expression() const noexcept { return expr_; }
    const std::string& describe() const noexcept { return text_; }

private:
    std::size_t arity_;
    Rule rule_;
    std::string text_;
    std::optional<expr::Expr> expr_;
};

/// Candidate member of the class R of 5-ary compressors.
class GFn {
public:
    explicit GFn(expr::Expr rule);

    double operator()(const MVector& m) const { return rule_.evaluate(m); }
    double operator()(double a, double b, double c, double d, double e) const { return (*this)(MVector{a, b, c, d, e}); }

    const expr::Expr& expression() const noexcept { return rule_; }
    std::string describe() const { return expr::to_string(rule_); }

private:
    expr::Expr rule_;
};

/// g = ½·max{t₁..t₅}.
GFn half_max_g();
/// g = max{t₁, t₂, t₃, (t₄+t₅)/2}.
GFn max_with_mean_g();

struct DominancePair {
    AlteringDistance psi;
    ControlFn phi;
};

enum class AxiomStatus { Pass, Fail, Indeterminate };

struct AxiomCheck {
    std::string axiom;
    AxiomStatus status = AxiomStatus::Pass;
    std::string detail;
    std::vector<double> witness;
    std::size_t evaluations = 0;
};

struct MembershipReport {
    std::string function_class;  // "psi", "phi" or "g"
    bool passed = true;
    std::vector<AxiomCheck> axioms;
};

const char* to_string(AxiomStatus s);

struct PsiGrid {
    double t_max = 10.0;
    /// Points of the coarse grid, including both ends.
    std::size_t points = 1001;
    /// The fine grid has refine × smaller spacing.
    std::size_t refine = 4;
};

/// Checks ψ(0)=0, ψ(t)>0 for t>0, monotonicity, and grid continuity.
///
/// Continuity is judged by the largest jump between adjacent nodes: it
/// must shrink when the spacing does (fine <= 0.75 × coarse) or already
/// be below 1e-12. The verdict is "consistent with continuity at
/// resolution h", never a proof.
MembershipReport verify_psi_membership(const AlteringDistance& psi, const PsiGrid& grid = {});

/// Checks φ(0,…,0)=0 exactly, nonnegativity, and the sequential upper
/// limit condition along geometric approach sequences
/// t_n = t* + r·0.5ⁿ·u (n = 1..10) toward `tuple_samples` random limits,
/// `sequence_samples` directions each.
///
/// A sequence flags a violation when its last value exceeds φ(t*) by more
/// than 1e-9 and the excess has not decayed over the final three terms
/// (last > 0.9 × third-to-last).
MembershipReport verify_phi_membership(const ControlFn& phi, std::size_t tuple_samples, std::uint64_t seed,
                                       std::size_t sequence_samples);

/// Checks the two anchor values, subhomogeneity (α = 0 is probed every
/// eighth sample) and coordinatewise monotonicity, each within 1e-12.
MembershipReport verify_g_membership(const GFn& g, std::size_t sample_budget, std::uint64_t seed);

struct DominanceRecord {
    std::vector<double> tuple;
    double phi = 0.0;
    double psi_of_max = 0.0;
    double gap = 0.0;  // psi_of_max - phi
};

struct DominanceReport {
    bool passed = true;
    std::size_t tuples_checked = 0;
    std::size_t violation_count = 0;
    std::size_t near_tie_count = 0;
    std::size_t indeterminate_count = 0;
    std::vector<DominanceRecord> violations;  // capped
    std::vector<DominanceRecord> near_ties;   // capped
    std::string first_error;
};

struct DominanceOptions {
    std::size_t tuple_samples = 10000;
    std::uint64_t seed = 0;
    double margin_report_threshold = 1e-12;
    /// Tuples are drawn from [0, t_range]^k, truncated to ψ's domain.
    double t_range = 10.0;
};

/// Checks φ(t) < ψ(max tᵢ) on nonzero tuples: first deterministic probes
/// (scaled axis vectors, diagonals), then seeded random tuples with
/// coordinates zeroed at random. gap <= 0 is a violation; 0 < gap <
/// threshold is a near tie.
DominanceReport verify_dominance(const DominancePair& pair, const DominanceOptions& options);

struct StepBoundVerdict {
    bool hypothesis_held = false;
    bool conclusion_held = false;
    double u = 0.0;
    double v = 0.0;
    double g_first = 0.0;   // g(v, v, u, v, u)
    double g_second = 0.0;  // g(v, u, v, v+u, 0)

    bool consistent() const noexcept { return !hypothesis_held || conclusion_held; }
};

/// u < max{g(v,v,u,v,u), g(v,u,v,v+u,0)} should force u < v for g in R.
StepBoundVerdict check_r_step_bound(const GFn& g, double u, double v);

struct DominanceBoundVerdict {
    bool hypothesis_held = false;
    bool conclusion_held = false;
    double psi_t = 0.0;
    double phi_s = 0.0;
    double max_s = 0.0;

    bool consistent() const noexcept { return !hypothesis_held || conclusion_held; }
};

/// ψ(t) <= φ(s) should force t < max sᵢ when φ < ψ∘max on nonzero tuples.
DominanceBoundVerdict check_dominance_bound(const DominancePair& pair, double t, std::span<const double> s);

}  // namespace fixpoint

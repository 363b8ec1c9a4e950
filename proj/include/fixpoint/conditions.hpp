#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fixpoint/expr.hpp"
#include "fixpoint/function_classes.hpp"
#include "fixpoint/metric.hpp"

namespace fixpoint {

/// (d(x,y), d(y,Ty), d(x,Tx), d(x,Ty), d(y,Tx)).
MVector m_vector(const SelfMap& map, const Point& x, const Point& y);

/// α·d(x,Tx) <= d(x,y). Pairs failing the gate are exempt from the
/// generalized contraction inequality.
bool suzuki_gate(const SelfMap& map, double alpha, const Point& x, const Point& y);

/// ψ(d(Tx,Ty)) <= φ(g₁(M), …, g_k(M)) on every pair passing the gate.
struct GeneralCondition {
    GeneralCondition(AlteringDistance psi, ControlFn phi, std::vector<GFn> gs, double alpha = 0.5);

    AlteringDistance psi;
    ControlFn phi;
    std::vector<GFn> gs;
    double alpha;
};

enum class Family {
    Banach,
    Branciari,
    Rhoades,
    Djoudi,
    Khan,
    Dutta,
    Doric,
    Choudhury,
    Morales,
    HPsiMax,
};

inline constexpr Family kAllFamilies[] = {Family::Banach, Family::Branciari, Family::Rhoades, Family::Djoudi,
                                          Family::Khan,   Family::Dutta,     Family::Doric,   Family::Choudhury,
                                          Family::Morales, Family::HPsiMax};

std::string_view to_string(Family f);
/// Accepts the names printed by to_string; "corollary22" is accepted for HPsiMax.
std::optional<Family> family_from_string(std::string_view name);

/// Integrand data for the integral-type families.
struct IntegralSpec {
    expr::Expr integrand;
    double t_max = 0.0;
    std::size_t subdivisions = 10000;
};

/// One of the classical contraction conditions, checked as printed
/// (without a gate).
///
///   banach      d(Tx,Ty) <= β d(x,y)
///   branciari   Ψ(d(Tx,Ty)) <= β Ψ(d(x,y)),        Ψ = ∫₀ᵗ f
///   rhoades     Ψ(d(Tx,Ty)) <= k Ψ(M₄(x,y)),       Ψ = ∫₀ᵗ f
///   djoudi      Ψ(d(Tx,Ty)) <= h(Ψ(M₅(x,y))),      Ψ = ∫₀ᵗ f
///   khan        ψ(d(Tx,Ty)) <= β ψ(d(x,y))
///   dutta       ψ(d(Tx,Ty)) <= ψ(d(x,y)) − h(d(x,y))
///   doric       ψ(d(Tx,Ty)) <= ψ(M₄) − h(M₄)
///   choudhury   ψ(d(Tx,Ty)) <= ψ(M₄) − h(max{d(x,y), d(y,Ty)})
///   morales     ψ(d(Tx,Ty)) <= a ψ(d(x,y)) + b ψ(m(x,y)),
///               m = d(y,Ty)(1 + d(x,Tx)) / (1 + d(x,y))
///   h_psi_max   ψ(d(Tx,Ty)) <= h(ψ(M₅))
///
/// M₄ = max{d(x,y), d(x,Tx), d(y,Ty), (d(x,Ty) + d(y,Tx))/2}, and M₅ is the
/// max of all five distances.
class SpecialCondition {
public:
    static SpecialCondition banach(double beta);
    static SpecialCondition branciari(double beta, IntegralSpec integral);
    static SpecialCondition rhoades(double k, IntegralSpec integral);
    static SpecialCondition djoudi(expr::Expr h, IntegralSpec integral);
    static SpecialCondition khan(double beta, AlteringDistance psi);
    static SpecialCondition dutta(AlteringDistance psi, expr::Expr h);
    static SpecialCondition doric(AlteringDistance psi, expr::Expr h);
    static SpecialCondition choudhury(AlteringDistance psi, expr::Expr h);
    static SpecialCondition morales(double a, double b, AlteringDistance psi);
    static SpecialCondition h_psi_max(AlteringDistance psi, expr::Expr h);

    Family family() const noexcept { return family_; }
    /// β for banach/branciari/khan, k for rhoades.
    double constant() const noexcept { return constant_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    const AlteringDistance& psi() const noexcept { return psi_; }
    const std::optional<expr::Expr>& h() const noexcept { return h_; }
    const std::optional<IntegralSpec>& integral() const noexcept { return integral_; }

    /// Both sides of the inequality at a pair.
    std::pair<double, double> sides(const SelfMap& map, const Point& x, const Point& y) const;
    /// Both sides from a precomputed M vector and d(Tx,Ty).
    std::pair<double, double> sides_at(const MVector& m, double d_images) const;

    std::string describe() const;

private:
    SpecialCondition(Family family, AlteringDistance psi) : family_(family), psi_(std::move(psi)) {}

    double h_at(double t) const { return h_->evaluate(std::span<const double>(&t, 1)); }

    Family family_;
    double constant_ = 0.0;
    double a_ = 0.0;
    double b_ = 0.0;
    AlteringDistance psi_;
    std::optional<expr::Expr> h_;
    std::optional<IntegralSpec> integral_;
};

/// Ordered pairs to test, in lexicographic (x, y) order for enumerated
/// sets.
struct PairSet {
    std::vector<std::pair<Point, Point>> pairs;
    bool exhaustive = false;
    std::size_t grid_pairs = 0;
    std::size_t random_pairs = 0;
};

inline constexpr std::size_t kMaxExhaustivePairs = 1'000'000;

struct SamplingOptions {
    /// Grid points per dimension on continuum spaces.
    std::size_t grid_resolution = 100;
    std::size_t random_pairs = 1000;
    std::uint64_t seed = 0;
};

/// All n² ordered pairs of a finite space.
PairSet exhaustive_pairs(const MetricSpace& space);

/// Finite spaces: exhaustive up to kMaxExhaustivePairs, otherwise
/// `random_pairs` seeded samples. Continuum spaces: the product grid
/// squared, followed by `random_pairs` seeded uniform pairs.
PairSet make_pair_set(const MetricSpace& space, const SamplingOptions& options);

enum class Verdict { Satisfied, Violated, Vacuous, Indeterminate };

std::string_view to_string(Verdict v);

struct PairRecord {
    Point x;
    Point y;
    double lhs = 0.0;
    double rhs = 0.0;
    MVector m{};
};

struct IndeterminateRecord {
    Point x;
    Point y;
    std::string error;
};

/// Outcome of checking one condition over a pair set.
///
/// violated iff violations is nonempty; vacuous iff no pair passed the
/// gate; indeterminate when neither holds but some pair could not be
/// evaluated.
struct ConditionReport {
    Verdict verdict = Verdict::Vacuous;
    std::size_t pairs_checked = 0;
    std::size_t gate_passed = 0;
    std::size_t clamp_events = 0;
    std::vector<PairRecord> violations;  // all of them, sorted by (x, y)
    std::size_t near_tie_count = 0;
    std::vector<PairRecord> near_ties;  // first kNearTieCap in pair order
    std::vector<IndeterminateRecord> indeterminate;
};

inline constexpr std::size_t kNearTieCap = 100;

struct CheckOptions {
    double near_tie_tolerance = 1e-12;
    /// Worker threads; 0 or 1 runs serially. Reports do not depend on it.
    std::size_t threads = 0;
};

ConditionReport check_general(const SelfMap& map, const GeneralCondition& cond, const PairSet& pairs,
                              const CheckOptions& options = {});

ConditionReport check_special(const SelfMap& map, const SpecialCondition& cond, const PairSet& pairs,
                              const CheckOptions& options = {});

struct InvariantBudget {
    std::size_t dominance_samples = 10000;
    std::size_t g_samples = 10000;
    std::uint64_t seed = 0;
    double dominance_range = 10.0;
};

/// A special condition rewritten as a generalized one, together with
/// the class checks of the result. Failed checks are reported here, not
/// thrown: some rewrites (dutta, choudhury at tuples with t₂ = 0; the
/// morales quotient g) do not satisfy every class hypothesis.
struct Reduction {
    GeneralCondition general;
    DominanceReport dominance;
    std::vector<MembershipReport> g_membership;
    bool invariants_hold = false;
};

/// The generalized instantiation of a special family:
///
///   banach       ψ = t,  g₁ = t1,                        φ = β·t1
///   branciari    ψ = Ψ,  g₁ = t1,                        φ = β·Ψ(t1)
///   rhoades      ψ = Ψ,  g₁ = max{t1,t2,t3,(t4+t5)/2},   φ = k·Ψ(t1)
///   djoudi       ψ = Ψ,  g₁ = max{t1..t5},               φ = h(Ψ(t1))
///   khan         ψ,      g₁ = t1,                        φ = β·ψ(t1)
///   dutta        ψ,      g₁ = g₂ = t1,                   φ = clamp0(ψ(t1) − h(t2))
///   doric        ψ,      g₁ = max{t1,t2,t3,(t4+t5)/2},   φ = clamp0(ψ(t1) − h(t1))
///   choudhury    ψ,      g₁ as doric, g₂ = max{t1,t2},   φ = clamp0(ψ(t1) − h(t2))
///   morales      ψ,      g₁ = t1, g₂ = t2(1+t3)/(1+t1),  φ = a·ψ(t1) + b·ψ(t2)
///   h_psi_max    ψ,      g₁ = max{t1..t5},               φ = h(ψ(t1))
///
/// with α = 1/2. When ψ and h are expressions φ is built by substitution
/// and prints as a single expression.
GeneralCondition reduce_condition(const SpecialCondition& cond, double alpha = 0.5);

/// reduce_condition plus the dominance and g-membership checks.
Reduction reduce_to_general(const SpecialCondition& cond, const InvariantBudget& budget = {}, double alpha = 0.5);

}  // namespace fixpoint

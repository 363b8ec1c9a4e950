#include "fixpoint/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixpoint/parallel.hpp"
#include "fixpoint/rng.hpp"

namespace fixpoint {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct PairGeometry {
    MVector m{};
    double d_images = 0.0;  // d(Tx, Ty)
    int clamps = 0;
};

PairGeometry geometry(const SelfMap& map, const Point& x, const Point& y) {
    const MetricSpace& s = map.space();
    const MapImage tx = map.image(x);
    const MapImage ty = map.image(y);
    PairGeometry g;
    g.m = {s.distance(x, y), s.distance(y, ty.point), s.distance(x, tx.point), s.distance(x, ty.point),
           s.distance(y, tx.point)};
    g.d_images = s.distance(tx.point, ty.point);
    g.clamps = static_cast<int>(tx.clamped) + static_cast<int>(ty.clamped);
    return g;
}

double max_with_mean(const MVector& m) { return std::max({m[0], m[1], m[2], (m[3] + m[4]) / 2}); }

double max_all(const MVector& m) { return *std::max_element(m.begin(), m.end()); }

enum class OutcomeKind { GateClosed, Holds, NearTie, Violation, Error };

struct Outcome {
    OutcomeKind kind = OutcomeKind::GateClosed;
    PairRecord record;
    std::string error;
    int clamps = 0;
};

bool pair_less(const PairRecord& a, const PairRecord& b) {
    if (a.x < b.x) return true;
    if (b.x < a.x) return false;
    return a.y < b.y;
}

/// Shared driver: `evaluate(x, y, outcome)` fills lhs/rhs/m and returns
/// false when the gate is closed.
template <typename Evaluate>
ConditionReport run_check(const PairSet& pairs, const CheckOptions& options, Evaluate&& evaluate) {
    std::vector<Outcome> outcomes(pairs.pairs.size());
    parallel_for(pairs.pairs.size(), options.threads, [&](std::size_t i) {
        const auto& [x, y] = pairs.pairs[i];
        Outcome& out = outcomes[i];
        out.record.x = x;
        out.record.y = y;
        try {
            if (!evaluate(x, y, out)) {
                out.kind = OutcomeKind::GateClosed;
                return;
            }
            const double lhs = out.record.lhs;
            const double rhs = out.record.rhs;
            if (lhs > rhs) {
                out.kind = OutcomeKind::Violation;
            } else if (std::abs(lhs - rhs) <= options.near_tie_tolerance) {
                out.kind = OutcomeKind::NearTie;
            } else {
                out.kind = OutcomeKind::Holds;
            }
        } catch (const std::exception& e) {
            out.kind = OutcomeKind::Error;
            out.error = e.what();
        }
    });

    ConditionReport report;
    report.pairs_checked = outcomes.size();
    for (auto& out : outcomes) {
        report.clamp_events += static_cast<std::size_t>(out.clamps);
        switch (out.kind) {
            case OutcomeKind::GateClosed:
                break;
            case OutcomeKind::Error:
                report.indeterminate.push_back({out.record.x, out.record.y, std::move(out.error)});
                break;
            case OutcomeKind::Violation:
                ++report.gate_passed;
                report.violations.push_back(std::move(out.record));
                break;
            case OutcomeKind::NearTie:
                ++report.gate_passed;
                ++report.near_tie_count;
                if (report.near_ties.size() < kNearTieCap) report.near_ties.push_back(std::move(out.record));
                break;
            case OutcomeKind::Holds:
                ++report.gate_passed;
                break;
        }
    }
    std::stable_sort(report.violations.begin(), report.violations.end(), pair_less);

    if (!report.violations.empty()) {
        report.verdict = Verdict::Violated;
    } else if (report.gate_passed == 0) {
        report.verdict = Verdict::Vacuous;
    } else if (!report.indeterminate.empty()) {
        report.verdict = Verdict::Indeterminate;
    } else {
        report.verdict = Verdict::Satisfied;
    }
    return report;
}

void require_unit_open(double v, std::string_view name) {
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1), got " + fmt(v));
}

void require_unary(const expr::Expr& h) {
    if (h.min_arity() > 1) throw std::invalid_argument("h must be a function of one variable");
}

AlteringDistance build_integral(const IntegralSpec& spec) {
    return integral_altering(spec.integrand, spec.t_max, spec.subdivisions);
}

}  // namespace

MVector m_vector(const SelfMap& map, const Point& x, const Point& y) { return geometry(map, x, y).m; }

bool suzuki_gate(const SelfMap& map, double alpha, const Point& x, const Point& y) {
    const MetricSpace& s = map.space();
    return alpha * s.distance(x, map.apply(x)) <= s.distance(x, y);
}

GeneralCondition::GeneralCondition(AlteringDistance psi_, ControlFn phi_, std::vector<GFn> gs_, double alpha_)
    : psi(std::move(psi_)), phi(std::move(phi_)), gs(std::move(gs_)), alpha(alpha_) {
    if (gs.size() != phi.arity()) {
        throw std::invalid_argument("control function has arity " + std::to_string(phi.arity()) + " but " +
                                    std::to_string(gs.size()) + " g functions were given");
    }
    if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2], got " + fmt(alpha));
}

std::string_view to_string(Family f) {
    switch (f) {
        case Family::Banach:
            return "banach";
        case Family::Branciari:
            return "branciari";
        case Family::Rhoades:
            return "rhoades";
        case Family::Djoudi:
            return "djoudi";
        case Family::Khan:
            return "khan";
        case Family::Dutta:
            return "dutta";
        case Family::Doric:
            return "doric";
        case Family::Choudhury:
            return "choudhury";
        case Family::Morales:
            return "morales";
        case Family::HPsiMax:
            return "h_psi_max";
    }
    return "?";
}

std::optional<Family> family_from_string(std::string_view name) {
    for (Family f : kAllFamilies) {
        if (to_string(f) == name) return f;
    }
    if (name == "corollary22") return Family::HPsiMax;
    return std::nullopt;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied:
            return "satisfied";
        case Verdict::Violated:
            return "violated";
        case Verdict::Vacuous:
            return "vacuous";
        case Verdict::Indeterminate:
            return "indeterminate";
    }
    return "?";
}

SpecialCondition SpecialCondition::banach(double beta) {
    require_unit_open(beta, "beta");
    SpecialCondition c(Family::Banach, AlteringDistance::identity());
    c.constant_ = beta;
    return c;
}

SpecialCondition SpecialCondition::branciari(double beta, IntegralSpec integral) {
    require_unit_open(beta, "beta");
    SpecialCondition c(Family::Branciari, build_integral(integral));
    c.constant_ = beta;
    c.integral_ = std::move(integral);
    return c;
}

SpecialCondition SpecialCondition::rhoades(double k, IntegralSpec integral) {
    if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("k must lie in [0, 1), got " + fmt(k));
    SpecialCondition c(Family::Rhoades, build_integral(integral));
    c.constant_ = k;
    c.integral_ = std::move(integral);
    return c;
}

SpecialCondition SpecialCondition::djoudi(expr::Expr h, IntegralSpec integral) {
    require_unary(h);
    SpecialCondition c(Family::Djoudi, build_integral(integral));
    c.h_ = std::move(h);
    c.integral_ = std::move(integral);
    return c;
}

SpecialCondition SpecialCondition::khan(double beta, AlteringDistance psi) {
    require_unit_open(beta, "beta");
    SpecialCondition c(Family::Khan, std::move(psi));
    c.constant_ = beta;
    return c;
}

SpecialCondition SpecialCondition::dutta(AlteringDistance psi, expr::Expr h) {
    require_unary(h);
    SpecialCondition c(Family::Dutta, std::move(psi));
    c.h_ = std::move(h);
    return c;
}

SpecialCondition SpecialCondition::doric(AlteringDistance psi, expr::Expr h) {
    require_unary(h);
    SpecialCondition c(Family::Doric, std::move(psi));
    c.h_ = std::move(h);
    return c;
}

SpecialCondition SpecialCondition::choudhury(AlteringDistance psi, expr::Expr h) {
    require_unary(h);
    SpecialCondition c(Family::Choudhury, std::move(psi));
    c.h_ = std::move(h);
    return c;
}

SpecialCondition SpecialCondition::morales(double a, double b, AlteringDistance psi) {
    if (!(a > 0.0 && b > 0.0 && a + b < 1.0)) {
        throw std::invalid_argument("morales needs a > 0, b > 0, a + b < 1; got a = " + fmt(a) + ", b = " + fmt(b));
    }
    SpecialCondition c(Family::Morales, std::move(psi));
    c.a_ = a;
    c.b_ = b;
    return c;
}

SpecialCondition SpecialCondition::h_psi_max(AlteringDistance psi, expr::Expr h) {
    require_unary(h);
    SpecialCondition c(Family::HPsiMax, std::move(psi));
    c.h_ = std::move(h);
    return c;
}

std::pair<double, double> SpecialCondition::sides(const SelfMap& map, const Point& x, const Point& y) const {
    const PairGeometry g = geometry(map, x, y);
    return sides_at(g.m, g.d_images);
}

std::pair<double, double> SpecialCondition::sides_at(const MVector& m, double d_images) const {
    const double dxy = m[0];
    switch (family_) {
        case Family::Banach:
            return {d_images, constant_ * dxy};
        case Family::Branciari:
        case Family::Khan:
            return {psi_(d_images), constant_ * psi_(dxy)};
        case Family::Rhoades:
            return {psi_(d_images), constant_ * psi_(max_with_mean(m))};
        case Family::Djoudi:
        case Family::HPsiMax:
            return {psi_(d_images), h_at(psi_(max_all(m)))};
        case Family::Dutta:
            return {psi_(d_images), psi_(dxy) - h_at(dxy)};
        case Family::Doric: {
            const double big = max_with_mean(m);
            return {psi_(d_images), psi_(big) - h_at(big)};
        }
        case Family::Choudhury:
            return {psi_(d_images), psi_(max_with_mean(m)) - h_at(std::max(dxy, m[1]))};
        case Family::Morales: {
            const double rational = m[1] * (1 + m[2]) / (1 + dxy);
            return {psi_(d_images), a_ * psi_(dxy) + b_ * psi_(rational)};
        }
    }
    throw std::logic_error("unknown family");
}

std::string SpecialCondition::describe() const {
    const std::string psi = psi_.describe();
    const std::string h = h_ ? expr::to_string(*h_, "t", true) : "";
    std::string s(to_string(family_));
    switch (family_) {
        case Family::Banach:
            return s + ": d(Tx,Ty) <= " + fmt(constant_) + "*d(x,y)";
        case Family::Branciari:
        case Family::Khan:
            return s + ": psi(d(Tx,Ty)) <= " + fmt(constant_) + "*psi(d(x,y)), psi(t) = " + psi;
        case Family::Rhoades:
            return s + ": psi(d(Tx,Ty)) <= " + fmt(constant_) + "*psi(M4(x,y)), psi(t) = " + psi;
        case Family::Djoudi:
        case Family::HPsiMax:
            return s + ": psi(d(Tx,Ty)) <= h(psi(M5(x,y))), psi(t) = " + psi + ", h(t) = " + h;
        case Family::Dutta:
            return s + ": psi(d(Tx,Ty)) <= psi(d(x,y)) - h(d(x,y)), psi(t) = " + psi + ", h(t) = " + h;
        case Family::Doric:
            return s + ": psi(d(Tx,Ty)) <= psi(M4(x,y)) - h(M4(x,y)), psi(t) = " + psi + ", h(t) = " + h;
        case Family::Choudhury:
            return s + ": psi(d(Tx,Ty)) <= psi(M4(x,y)) - h(max{d(x,y), d(y,Ty)}), psi(t) = " + psi + ", h(t) = " + h;
        case Family::Morales:
            return s + ": psi(d(Tx,Ty)) <= " + fmt(a_) + "*psi(d(x,y)) + " + fmt(b_) + "*psi(m(x,y)), psi(t) = " + psi;
    }
    return s;
}

PairSet exhaustive_pairs(const MetricSpace& space) {
    if (!space.is_finite()) throw std::invalid_argument("exhaustive pair sets need a finite space");
    const std::size_t n = space.cardinality();
    if (n * n > kMaxExhaustivePairs) throw std::invalid_argument("finite space too large for exhaustive enumeration");
    PairSet set;
    set.exhaustive = true;
    set.pairs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) set.pairs.emplace_back(Point::at_index(i), Point::at_index(j));
    }
    set.grid_pairs = set.pairs.size();
    return set;
}

PairSet make_pair_set(const MetricSpace& space, const SamplingOptions& options) {
    Rng rng(options.seed);
    if (space.is_finite()) {
        const std::size_t n = space.cardinality();
        if (n * n <= kMaxExhaustivePairs) return exhaustive_pairs(space);
        PairSet set;
        for (std::size_t s = 0; s < options.random_pairs; ++s) {
            Point x = Point::at_index(rng.index(n));
            Point y = Point::at_index(rng.index(n));
            set.pairs.emplace_back(std::move(x), std::move(y));
        }
        set.random_pairs = options.random_pairs;
        return set;
    }

    const std::size_t dim = space.dimension();
    const std::size_t res = options.grid_resolution;
    if (res == 1) throw std::invalid_argument("grid_resolution must be 0 (no grid) or at least 2");
    std::vector<Point> grid;
    if (res >= 2) {
        double count = 1.0;
        for (std::size_t d = 0; d < dim; ++d) count *= static_cast<double>(res);
        if (count * count > 1e7) throw std::invalid_argument("grid has too many pairs; lower grid_resolution");
        std::vector<std::vector<double>> axes(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const double lo = space.lower()[d];
            const double hi = space.upper()[d];
            for (std::size_t i = 0; i < res; ++i) {
                axes[d].push_back(i + 1 == res ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(res - 1));
            }
        }
        std::vector<std::size_t> idx(dim, 0);
        for (;;) {
            std::vector<double> c(dim);
            for (std::size_t d = 0; d < dim; ++d) c[d] = axes[d][idx[d]];
            grid.push_back(Point::at(std::move(c)));
            std::size_t d = dim;
            while (d > 0 && ++idx[d - 1] == res) idx[--d] = 0;
            if (d == 0) break;
        }
    }

    PairSet set;
    set.pairs.reserve(grid.size() * grid.size() + options.random_pairs);
    for (const auto& x : grid) {
        for (const auto& y : grid) set.pairs.emplace_back(x, y);
    }
    set.grid_pairs = set.pairs.size();
    auto random_point = [&] {
        std::vector<double> c(dim);
        for (std::size_t d = 0; d < dim; ++d) c[d] = rng.uniform(space.lower()[d], space.upper()[d]);
        return Point::at(std::move(c));
    };
    for (std::size_t s = 0; s < options.random_pairs; ++s) {
        Point x = random_point();
        Point y = random_point();
        set.pairs.emplace_back(std::move(x), std::move(y));
    }
    set.random_pairs = options.random_pairs;
    return set;
}

ConditionReport check_general(const SelfMap& map, const GeneralCondition& cond, const PairSet& pairs,
                              const CheckOptions& options) {
    return run_check(pairs, options, [&](const Point& x, const Point& y, Outcome& out) {
        const PairGeometry g = geometry(map, x, y);
        out.clamps = g.clamps;
        out.record.m = g.m;
        if (!(cond.alpha * g.m[2] <= g.m[0])) return false;
        std::vector<double> compressed(cond.gs.size());
        for (std::size_t i = 0; i < cond.gs.size(); ++i) compressed[i] = cond.gs[i](g.m);
        out.record.lhs = cond.psi(g.d_images);
        out.record.rhs = cond.phi(compressed);
        return true;
    });
}

ConditionReport check_special(const SelfMap& map, const SpecialCondition& cond, const PairSet& pairs,
                              const CheckOptions& options) {
    return run_check(pairs, options, [&](const Point& x, const Point& y, Outcome& out) {
        const PairGeometry g = geometry(map, x, y);
        out.clamps = g.clamps;
        out.record.m = g.m;
        const auto [lhs, rhs] = cond.sides_at(g.m, g.d_images);
        out.record.lhs = lhs;
        out.record.rhs = rhs;
        return true;
    });
}

}  // namespace fixpoint

#include "fixpoint/function_classes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixpoint/metric.hpp"
#include "fixpoint/rng.hpp"

namespace fixpoint {

namespace {

AxiomCheck named_check(std::string name) {
    AxiomCheck check;
    check.axiom = std::move(name);
    return check;
}

constexpr std::size_t kRecordCap = 100;
constexpr double kClassSlack = 1e-12;
constexpr double kUpperLimitSlack = 1e-9;
constexpr double kApproachRatio = 0.5;
constexpr int kApproachTerms = 10;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string fmt_tuple(std::span<const double> t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ", ";
        s += fmt(t[i]);
    }
    return s + ")";
}

void fail(AxiomCheck& check, std::string detail, std::vector<double> witness) {
    if (check.status == AxiomStatus::Pass) {
        check.status = AxiomStatus::Fail;
        check.detail = std::move(detail);
        check.witness = std::move(witness);
    }
}

void indeterminate(AxiomCheck& check, std::string detail, std::vector<double> witness) {
    if (check.status != AxiomStatus::Fail) {
        check.status = AxiomStatus::Indeterminate;
        check.detail = std::move(detail);
        check.witness = std::move(witness);
    }
}

void finish(MembershipReport& report) {
    report.passed = std::all_of(report.axioms.begin(), report.axioms.end(),
                                [](const AxiomCheck& a) { return a.status == AxiomStatus::Pass; });
}

}  // namespace

const char* to_string(AxiomStatus s) {
    switch (s) {
        case AxiomStatus::Pass:
            return "pass";
        case AxiomStatus::Fail:
            return "fail";
        case AxiomStatus::Indeterminate:
            return "indeterminate";
    }
    return "?";
}

AlteringDistance::AlteringDistance(expr::Expr rule) : rule_(std::move(rule)) {
    if (rule_->min_arity() > 1) throw std::invalid_argument("altering distance must be a function of one variable");
}

AlteringDistance::AlteringDistance(std::shared_ptr<const CumulativeIntegral> integral)
    : integral_(std::move(integral)) {
    if (!integral_) throw std::invalid_argument("null integral");
}

AlteringDistance AlteringDistance::identity() { return AlteringDistance(expr::Expr::variable(0)); }

double AlteringDistance::operator()(double t) const {
    if (integral_) return (*integral_)(t);
    if (!(t >= 0.0)) throw DomainError("altering distance evaluated at negative argument " + fmt(t));
    return rule_->evaluate(std::span<const double>(&t, 1));
}

double AlteringDistance::domain_max() const noexcept {
    return integral_ ? integral_->t_max() : std::numeric_limits<double>::infinity();
}

std::string AlteringDistance::describe() const {
    if (integral_) return "integral(" + integral_->label() + ", 0, t)";
    return expr::to_string(*rule_, "t", true);
}

AlteringDistance integral_altering(const expr::Expr& integrand, double t_max, std::size_t subdivisions) {
    if (integrand.min_arity() > 1) throw std::invalid_argument("integrand must be a function of one variable");
    auto f = [&integrand](double t) { return integrand.evaluate(std::span<const double>(&t, 1)); };
    return AlteringDistance(std::make_shared<const CumulativeIntegral>(f, t_max, subdivisions,
                                                                       expr::to_string(integrand, "t", true)));
}

ControlFn::ControlFn(expr::Expr rule, std::size_t arity) : arity_(arity), expr_(rule) {
    if (arity == 0) throw std::invalid_argument("control function arity must be at least 1");
    if (rule.min_arity() > arity) {
        throw std::invalid_argument("control function references t" + std::to_string(rule.min_arity()) +
                                    " but has arity " + std::to_string(arity));
    }
    rule_ = [rule](std::span<const double> t) { return rule.evaluate(t); };
    text_ = expr::to_string(rule);
}

ControlFn::ControlFn(std::size_t arity, Rule rule, std::string text)
    : arity_(arity), rule_(std::move(rule)), text_(std::move(text)) {
    if (arity == 0) throw std::invalid_argument("control function arity must be at least 1");
}

double ControlFn::raw(std::span<const double> t) const {
    if (t.size() != arity_) {
        throw std::invalid_argument("control function of arity " + std::to_string(arity_) + " given " +
                                    std::to_string(t.size()) + " arguments");
    }
    return rule_(t);
}

double ControlFn::operator()(std::span<const double> t) const { return std::max(0.0, raw(t)); }

GFn::GFn(expr::Expr rule) : rule_(std::move(rule)) {
    if (rule_.min_arity() > 5) throw std::invalid_argument("g functions take at most five arguments");
}

GFn half_max_g() { return GFn(expr::parse("max(t1, t2, t3, t4, t5)/2", 5)); }

GFn max_with_mean_g() { return GFn(expr::parse("max(t1, t2, t3, (t4 + t5)/2)", 5)); }

MembershipReport verify_psi_membership(const AlteringDistance& psi, const PsiGrid& grid) {
    if (grid.points < 2 || grid.refine < 2) throw std::invalid_argument("psi grid needs >= 2 points and refine >= 2");
    const double t_max = std::min(grid.t_max, psi.domain_max());
    if (!(t_max > 0.0)) throw std::invalid_argument("psi grid t_max must be positive");

    const std::size_t fine_points = (grid.points - 1) * grid.refine + 1;
    const double h_fine = t_max / static_cast<double>(fine_points - 1);
    const double h_coarse = h_fine * static_cast<double>(grid.refine);

    MembershipReport report;
    report.function_class = "psi";
    AxiomCheck zero = named_check("zero_at_origin");
    AxiomCheck positive = named_check("positive_away_from_origin");
    AxiomCheck monotone = named_check("monotone_nondecreasing");
    AxiomCheck continuity = named_check("continuity");
    AxiomCheck evaluable = named_check("evaluable");

    std::vector<double> t(fine_points);
    std::vector<double> v(fine_points, std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> ok(fine_points, false);
    for (std::size_t i = 0; i < fine_points; ++i) {
        t[i] = i + 1 == fine_points ? t_max : static_cast<double>(i) * h_fine;
        try {
            v[i] = psi(t[i]);
            ok[i] = std::isfinite(v[i]);
            if (!ok[i]) indeterminate(evaluable, "non-finite value at t = " + fmt(t[i]), {t[i]});
        } catch (const std::exception& e) {
            indeterminate(evaluable, std::string(e.what()) + " at t = " + fmt(t[i]), {t[i]});
        }
        ++evaluable.evaluations;
    }

    const double zero_tol = psi.is_integral() ? kClassSlack : 0.0;
    zero.evaluations = 1;
    if (!ok[0]) {
        indeterminate(zero, "psi(0) could not be evaluated", {0.0});
    } else if (std::abs(v[0]) > zero_tol) {
        fail(zero, "psi(0) = " + fmt(v[0]) + ", expected 0", {0.0});
    }

    for (std::size_t i = 1; i < fine_points; ++i) {
        if (!ok[i]) continue;
        ++positive.evaluations;
        if (!(v[i] > 0.0)) fail(positive, "psi(" + fmt(t[i]) + ") = " + fmt(v[i]) + " is not positive", {t[i]});
    }

    double jump_fine = 0.0;
    double jump_coarse = 0.0;
    for (std::size_t i = 1; i < fine_points; ++i) {
        if (!ok[i] || !ok[i - 1]) continue;
        ++monotone.evaluations;
        if (v[i] < v[i - 1]) {
            fail(monotone, "psi decreases from " + fmt(v[i - 1]) + " to " + fmt(v[i]) + " between t = " +
                               fmt(t[i - 1]) + " and t = " + fmt(t[i]),
                 {t[i - 1], t[i]});
        }
        jump_fine = std::max(jump_fine, std::abs(v[i] - v[i - 1]));
    }
    for (std::size_t i = grid.refine; i < fine_points; i += grid.refine) {
        if (!ok[i] || !ok[i - grid.refine]) continue;
        jump_coarse = std::max(jump_coarse, std::abs(v[i] - v[i - grid.refine]));
    }
    continuity.evaluations = fine_points;
    if (jump_fine <= kClassSlack || jump_fine <= 0.75 * jump_coarse) {
        continuity.detail = "consistent with continuity at resolution h = " + fmt(h_fine) +
                            " (max adjacent jump " + fmt(jump_fine) + ", was " + fmt(jump_coarse) +
                            " at h = " + fmt(h_coarse) + ")";
    } else {
        fail(continuity,
             "max adjacent jump " + fmt(jump_fine) + " at h = " + fmt(h_fine) + " did not shrink from " +
                 fmt(jump_coarse) + " at h = " + fmt(h_coarse),
             {});
    }

    report.axioms = {zero, positive, monotone, continuity};
    if (evaluable.status != AxiomStatus::Pass) report.axioms.push_back(evaluable);
    finish(report);
    return report;
}

MembershipReport verify_phi_membership(const ControlFn& phi, std::size_t tuple_samples, std::uint64_t seed,
                                       std::size_t sequence_samples) {
    if (tuple_samples == 0 || sequence_samples == 0) throw std::invalid_argument("sample counts must be >= 1");
    const std::size_t k = phi.arity();
    MembershipReport report;
    report.function_class = "phi";
    AxiomCheck zero = named_check("zero_at_origin");
    AxiomCheck nonneg = named_check("nonnegative");
    AxiomCheck upper = named_check("sequential_upper_limit");

    const std::vector<double> origin(k, 0.0);
    zero.evaluations = 1;
    try {
        const double v0 = phi(origin);
        if (v0 != 0.0) fail(zero, "phi(0, ..., 0) = " + fmt(v0) + ", expected 0", origin);
    } catch (const std::exception& e) {
        indeterminate(zero, e.what(), origin);
    }

    Rng rng(seed);
    std::vector<double> limit(k);
    std::vector<double> dir(k);
    std::vector<double> term(k);
    std::array<double, kApproachTerms> excess{};
    for (std::size_t s = 0; s < tuple_samples; ++s) {
        for (auto& c : limit) c = (s == 0 || rng.chance(0.25)) ? 0.0 : rng.uniform(0.0, 10.0);
        double limit_value = 0.0;
        try {
            limit_value = phi(limit);
            ++nonneg.evaluations;
            if (limit_value < 0.0) fail(nonneg, "phi" + fmt_tuple(limit) + " = " + fmt(limit_value), limit);
        } catch (const std::exception& e) {
            indeterminate(upper, e.what(), limit);
            continue;
        }
        for (std::size_t q = 0; q < sequence_samples; ++q) {
            const double radius = 1.0 - rng.unit();  // (0, 1]
            for (std::size_t i = 0; i < k; ++i) {
                dir[i] = rng.uniform(-1.0, 1.0);
                if (limit[i] + kApproachRatio * radius * dir[i] < 0.0) dir[i] = -dir[i];
            }
            try {
                double scale = radius;
                for (int n = 0; n < kApproachTerms; ++n) {
                    scale *= kApproachRatio;
                    for (std::size_t i = 0; i < k; ++i) term[i] = std::max(0.0, limit[i] + scale * dir[i]);
                    excess[n] = phi(term) - limit_value;
                }
                upper.evaluations += kApproachTerms;
                const double last = excess[kApproachTerms - 1];
                if (last > kUpperLimitSlack && last > 0.9 * excess[kApproachTerms - 3]) {
                    fail(upper,
                         "values along a sequence converging to " + fmt_tuple(limit) + " stay " + fmt(last) +
                             " above phi at the limit",
                         limit);
                }
            } catch (const std::exception& e) {
                indeterminate(upper, e.what(), limit);
            }
        }
    }
    if (upper.status == AxiomStatus::Pass) {
        upper.detail = "no upward jump found on " + std::to_string(tuple_samples * sequence_samples) +
                       " geometric approach sequences";
    }
    report.axioms = {zero, nonneg, upper};
    finish(report);
    return report;
}

MembershipReport verify_g_membership(const GFn& g, std::size_t sample_budget, std::uint64_t seed) {
    if (sample_budget == 0) throw std::invalid_argument("sample_budget must be >= 1");
    MembershipReport report;
    report.function_class = "g";
    AxiomCheck anchors = named_check("anchor_values");
    AxiomCheck nonneg = named_check("nonnegative");
    AxiomCheck subhom = named_check("subhomogeneous");
    AxiomCheck monotone = named_check("monotone");

    for (const MVector& a : {MVector{1, 1, 1, 0, 2}, MVector{1, 1, 1, 1, 1}}) {
        const std::vector<double> w(a.begin(), a.end());
        ++anchors.evaluations;
        try {
            const double v = g(a);
            if (!(v > 0.0 && v <= 1.0)) fail(anchors, "g" + fmt_tuple(a) + " = " + fmt(v) + " is not in (0, 1]", w);
        } catch (const std::exception& e) {
            indeterminate(anchors, e.what(), w);
        }
    }

    Rng rng(seed);
    auto draw = [&rng](double zero_chance, double hi) {
        MVector x{};
        for (auto& c : x) c = rng.chance(zero_chance) ? 0.0 : rng.uniform(0.0, hi);
        return x;
    };
    auto as_witness = [](std::initializer_list<double> head, const MVector& x) {
        std::vector<double> w(head);
        w.insert(w.end(), x.begin(), x.end());
        return w;
    };

    for (std::size_t s = 0; s < sample_budget; ++s) {
        const MVector x = draw(0.2, 10.0);
        const double alpha = s % 8 == 0 ? 0.0 : rng.uniform(0.0, 4.0);
        MVector scaled{};
        for (std::size_t i = 0; i < 5; ++i) scaled[i] = alpha * x[i];
        try {
            const double gx = g(x);
            const double gs = g(scaled);
            subhom.evaluations += 2;
            nonneg.evaluations += 2;
            if (gx < 0.0) fail(nonneg, "g" + fmt_tuple(x) + " = " + fmt(gx), as_witness({}, x));
            if (gs > alpha * gx + kClassSlack) {
                fail(subhom,
                     "g(alpha*x) = " + fmt(gs) + " > alpha*g(x) = " + fmt(alpha * gx) + " at alpha = " + fmt(alpha) +
                         ", x = " + fmt_tuple(x),
                     as_witness({alpha}, x));
            }
        } catch (const std::exception& e) {
            indeterminate(subhom, e.what(), as_witness({alpha}, x));
        }
    }

    for (std::size_t s = 0; s < sample_budget; ++s) {
        const MVector x = draw(0.2, 10.0);
        MVector y = x;
        for (auto& c : y) c += rng.chance(0.3) ? 0.0 : rng.uniform(0.0, 5.0);
        try {
            const double gx = g(x);
            const double gy = g(y);
            monotone.evaluations += 2;
            if (gx > gy + kClassSlack) {
                std::vector<double> w(x.begin(), x.end());
                w.insert(w.end(), y.begin(), y.end());
                fail(monotone,
                     "g" + fmt_tuple(x) + " = " + fmt(gx) + " > g" + fmt_tuple(y) + " = " + fmt(gy) +
                         " although x <= y coordinatewise",
                     std::move(w));
            }
        } catch (const std::exception& e) {
            indeterminate(monotone, e.what(), as_witness({}, x));
        }
    }

    report.axioms = {anchors, nonneg, subhom, monotone};
    finish(report);
    return report;
}

DominanceReport verify_dominance(const DominancePair& pair, const DominanceOptions& options) {
    const std::size_t k = pair.phi.arity();
    const double range = std::min(options.t_range, pair.psi.domain_max());
    if (!(range > 0.0)) throw std::invalid_argument("dominance t_range must be positive");
    DominanceReport report;

    auto check = [&](const std::vector<double>& tuple) {
        ++report.tuples_checked;
        try {
            const double top = *std::max_element(tuple.begin(), tuple.end());
            DominanceRecord rec{tuple, pair.phi(tuple), pair.psi(top), 0.0};
            rec.gap = rec.psi_of_max - rec.phi;
            if (!(rec.gap > 0.0)) {
                ++report.violation_count;
                if (report.violations.size() < kRecordCap) report.violations.push_back(std::move(rec));
            } else if (rec.gap < options.margin_report_threshold) {
                ++report.near_tie_count;
                if (report.near_ties.size() < kRecordCap) report.near_ties.push_back(std::move(rec));
            }
        } catch (const std::exception& e) {
            if (report.indeterminate_count++ == 0) report.first_error = std::string(e.what()) + " at " + fmt_tuple(tuple);
        }
    };

    for (double scale : {1.0, 0.5, 2.0, 0.1, 5.0, 1e-3, range}) {
        if (scale > range) continue;
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<double> axis(k, 0.0);
            axis[i] = scale;
            check(axis);
        }
        if (k > 1) check(std::vector<double>(k, scale));
    }

    Rng rng(options.seed);
    for (std::size_t s = 0; s < options.tuple_samples; ++s) {
        std::vector<double> tuple(k);
        bool nonzero = false;
        for (auto& c : tuple) {
            c = rng.chance(0.25) ? 0.0 : rng.uniform(0.0, range);
            nonzero = nonzero || c > 0.0;
        }
        if (!nonzero) tuple[rng.index(k)] = range * (1.0 - rng.unit());
        check(tuple);
    }

    report.passed = report.violation_count == 0 && report.indeterminate_count == 0;
    return report;
}

StepBoundVerdict check_r_step_bound(const GFn& g, double u, double v) {
    StepBoundVerdict r;
    r.u = u;
    r.v = v;
    r.g_first = g(v, v, u, v, u);
    r.g_second = g(v, u, v, v + u, 0.0);
    r.hypothesis_held = u < std::max(r.g_first, r.g_second);
    r.conclusion_held = u < v;
    return r;
}

DominanceBoundVerdict check_dominance_bound(const DominancePair& pair, double t, std::span<const double> s) {
    if (s.empty()) throw std::invalid_argument("dominance bound needs a nonempty tuple");
    DominanceBoundVerdict r;
    r.psi_t = pair.psi(t);
    r.phi_s = pair.phi(s);
    r.max_s = *std::max_element(s.begin(), s.end());
    r.hypothesis_held = r.psi_t <= r.phi_s;
    r.conclusion_held = t < r.max_s;
    return r;
}

}  // namespace fixpoint

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixpoint/cli/commands.hpp"
#include "fixpoint/cli/config.hpp"
#include "fixpoint/conditions.hpp"
#include "fixpoint/function_classes.hpp"
#include "fixpoint/rng.hpp"
#include "fixpoint/solver.hpp"

namespace {

using namespace fixpoint;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Detail {
public:
    template <typename T>
    Detail& operator<<(const T& v) {
        os_ << v;
        return *this;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

expr::Expr ex(std::string_view src, std::size_t arity) { return expr::parse(src, arity); }

SelfMap interval_map(std::string_view src) { return SelfMap::expression(MetricSpace::interval(0, 1), {ex(src, 1)}); }

double bisect_cos_fixed_point() {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::cos(mid) - mid > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

GeneralCondition banach_general() {
    return GeneralCondition(AlteringDistance::identity(), ControlFn(ex("0.5*t1", 1), 1), {GFn(ex("t1", 5))}, 0.5);
}

Outcome ac1() {
    const auto start = std::chrono::steady_clock::now();
    const auto r = picard_solve(interval_map("cos(x)"), Point::at(0.0), {1e-12, 1e-9, 10000, 10000});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double oracle = bisect_cos_fixed_point();
    const double x = r.fixed_point.coords[0];
    Outcome o;
    o.pass = r.converged && std::abs(x - oracle) <= 1e-8 && std::abs(x - 0.7390851332) <= 1e-8 && r.iterations <= 200 &&
             secs < 1.0;
    o.detail = (Detail() << "x*=" << x << " oracle=" << oracle << " iterations=" << r.iterations
                         << " time=" << secs << "s")
                   .str();
    return o;
}

Outcome ac2() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    const auto halving = interval_map("x/2");
    const auto grid = make_pair_set(halving.space(), {100, 0, 0});
    const auto sat = check_general(halving, banach_general(), grid);
    const double s1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    t0 = std::chrono::steady_clock::now();
    const auto space = MetricSpace::finite({{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}});
    const auto table = SelfMap::table(space, {0, 3, 0, 0});
    const auto pairs = exhaustive_pairs(space);
    const auto vio = check_general(table, banach_general(), pairs);
    const auto again = check_general(table, banach_general(), pairs, {1e-12, 4});
    const double s2 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool has_witness = false;
    for (const auto& v : vio.violations) has_witness = has_witness || (v.x.index == 1 && v.y.index == 0);
    bool same = vio.violations.size() == again.violations.size();
    for (std::size_t i = 0; same && i < vio.violations.size(); ++i) {
        same = vio.violations[i].x == again.violations[i].x && vio.violations[i].y == again.violations[i].y;
    }
    o.pass = sat.verdict == Verdict::Satisfied && sat.violations.empty() && grid.pairs.size() == 10000 &&
             vio.verdict == Verdict::Violated && has_witness && same && s1 < 1.0 && s2 < 1.0;
    o.detail = (Detail() << "grid " << grid.pairs.size() << " pairs: " << to_string(sat.verdict) << " ("
                         << sat.violations.size() << " violations, " << s1 << "s); table map: " << to_string(vio.verdict)
                         << ", witness (1,0) " << (has_witness ? "present" : "absent") << " among "
                         << vio.violations.size() << " violations, first listed ("
                         << (vio.violations.empty() ? std::string("-") : to_string(vio.violations[0].x) + "," +
                                                                            to_string(vio.violations[0].y))
                         << "), " << s2 << "s")
                   .str();
    return o;
}

Outcome ac3() {
    Outcome o;
    std::size_t passes = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        passes += verify_g_membership(half_max_g(), 10000, seed).passed ? 1 : 0;
        passes += verify_g_membership(max_with_mean_g(), 10000, seed).passed ? 1 : 0;
    }
    const auto mutated = verify_g_membership(GFn(ex("max(t1, t2, t3, t4, t5) + 0.5", 5)), 10000, 1);
    bool witness_at_zero = false;
    for (const auto& a : mutated.axioms) {
        if (a.axiom == "subhomogeneous" && a.status == AxiomStatus::Fail && !a.witness.empty()) {
            witness_at_zero = a.witness[0] == 0.0;
        }
    }
    o.pass = passes == 10 && !mutated.passed && witness_at_zero;
    o.detail = (Detail() << passes << "/10 example runs pass; max+0.5 "
                         << (mutated.passed ? "passes" : "fails") << ", subhomogeneity witness at alpha=0: "
                         << (witness_at_zero ? "yes" : "no"))
                   .str();
    return o;
}

std::vector<GFn> catalog_g() {
    return {half_max_g(), max_with_mean_g(), GFn(ex("t1", 5)), GFn(ex("max(t1, t2)", 5))};
}

Outcome ac4() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(4);
    std::size_t bad = 0, hypotheses = 0;
    for (const auto& g : catalog_g()) {
        for (int i = 0; i < 100000; ++i) {
            const double u = rng.chance(0.05) ? 0.0 : rng.uniform(0.0, 10.0);
            const double v = rng.chance(0.05) ? u : (rng.chance(0.05) ? 0.0 : rng.uniform(0.0, 10.0));
            const auto r = check_r_step_bound(g, u, v);
            hypotheses += r.hypothesis_held ? 1 : 0;
            bad += r.consistent() ? 0 : 1;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {bad == 0 && hypotheses > 0 && secs < 10.0,
            (Detail() << catalog_g().size() << " g x 1e5 trials, " << hypotheses << " with hypothesis, " << bad
                      << " counterexamples, " << secs << "s")
                .str()};
}

std::vector<DominancePair> catalog_dominance() {
    const auto id = AlteringDistance::identity();
    const auto sq = AlteringDistance(ex("t^2", 1));
    return {
        {id, ControlFn(ex("t1/2", 1), 1)},
        {sq, ControlFn(ex("t1^2/2", 1), 1)},
        {id, ControlFn(ex("0.5*max(t1, t2)", 2), 2)},
        {AlteringDistance(ex("t + t^2", 1)), ControlFn(ex("(max(t1, t2) + max(t1, t2)^2)/2", 2), 2)},
        {id, ControlFn(ex("0.25*t1 + 0.25*t2", 2), 2)},
        {sq, ControlFn(ex("clamp0(t1^2 - t1/2)", 1), 1)},
    };
}

Outcome ac5() {
    Rng rng(5);
    std::size_t bad = 0, hypotheses = 0;
    const auto pairs = catalog_dominance();
    for (const auto& p : pairs) {
        const std::size_t k = p.phi.arity();
        std::vector<double> s(k);
        for (int i = 0; i < 100000; ++i) {
            // The dominance hypothesis covers nonzero tuples only.
            do {
                for (auto& si : s) si = rng.chance(0.1) ? 0.0 : rng.uniform(0.0, 10.0);
            } while (*std::max_element(s.begin(), s.end()) == 0.0);
            const double t = rng.chance(0.05) ? 0.0 : rng.uniform(0.0, 10.0);
            const auto r = check_dominance_bound(p, t, s);
            hypotheses += r.hypothesis_held ? 1 : 0;
            bad += r.consistent() ? 0 : 1;
        }
    }
    return {bad == 0 && hypotheses > 0, (Detail() << pairs.size() << " pairs x 1e5 trials, " << hypotheses
                                                  << " with hypothesis, " << bad << " counterexamples")
                                            .str()};
}

Outcome ac6() {
    // 9900 cells on [0,2] put every point 2i/99 on a grid node.
    const auto square = integral_altering(ex("2*t", 1), 2.0, 9900);
    double worst_rel = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = 2.0 * i / 99.0;
        const double err = std::abs(square(t) - t * t);
        worst_rel = std::max(worst_rel, t == 0.0 ? err : err / (t * t));
    }
    const auto sine = integral_altering(ex("cos(t)", 1), 1.5, 10000);
    double worst_sin = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = 1.5 * i / 99.0;
        worst_sin = std::max(worst_sin, std::abs(sine(t) - std::sin(t)));
    }
    const bool psi_ok = verify_psi_membership(square, {2.0, 1001, 4}).passed &&
                        verify_psi_membership(sine, {1.5, 1001, 4}).passed;
    return {worst_rel <= 1e-9 && worst_sin <= 1e-6 && psi_ok,
            (Detail() << "2t vs t^2 max rel err " << worst_rel << "; cos vs sin max abs err " << worst_sin
                      << "; psi membership " << (psi_ok ? "pass" : "fail"))
                .str()};
}

std::vector<SpecialCondition> catalog_families() {
    const auto id = AlteringDistance::identity();
    const auto sq = AlteringDistance(ex("t^2", 1));
    const auto h = ex("t/2", 1);
    const IntegralSpec f{ex("1 + t", 1), 2.0, 2000};
    return {SpecialCondition::banach(0.5),         SpecialCondition::branciari(0.5, f),
            SpecialCondition::rhoades(0.5, f),     SpecialCondition::djoudi(h, f),
            SpecialCondition::khan(0.5, sq),       SpecialCondition::dutta(id, h),
            SpecialCondition::doric(id, h),        SpecialCondition::choudhury(id, h),
            SpecialCondition::morales(0.25, 0.25, id), SpecialCondition::h_psi_max(id, h)};
}

Outcome ac7() {
    Rng rng(7);
    std::size_t implication_failures = 0, special_satisfied = 0, pairwise_failures = 0, runs = 0;
    const auto families = catalog_families();
    for (int m = 0; m < 20; ++m) {
        std::vector<double> coords(6);
        std::vector<std::size_t> table(6);
        if (m % 2 == 0) {
            // Orbit 1, c, c^2, ... and 0 under the shift: d(Tx, Ty) = c d(x, y).
            const double c = rng.uniform(0.05, 0.45);
            for (std::size_t i = 0; i < 5; ++i) coords[i] = std::pow(c, static_cast<double>(i));
            coords[5] = 0.0;
            for (std::size_t i = 0; i < 6; ++i) table[i] = i == 4 ? 5 : std::min<std::size_t>(i + 1, 5);
        } else {
            // Images come from a seeded subset of 1 to 6 points, so some maps collapse.
            for (auto& c : coords) c = rng.unit();
            const std::size_t range = 1 + rng.index(6);
            std::vector<std::size_t> targets(6);
            for (std::size_t i = 0; i < 6; ++i) targets[i] = i;
            for (std::size_t i = 5; i > 0; --i) std::swap(targets[i], targets[rng.index(i + 1)]);
            for (auto& t : table) t = targets[rng.index(range)];
        }
        std::vector<std::vector<double>> matrix(6, std::vector<double>(6));
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) matrix[i][j] = std::abs(coords[i] - coords[j]);
        }
        const auto space = MetricSpace::finite(matrix);
        const auto map = SelfMap::table(space, table);
        const auto pairs = exhaustive_pairs(space);
        for (const auto& cond : families) {
            ++runs;
            const auto sr = check_special(map, cond, pairs);
            const auto gr = check_general(map, reduce_condition(cond), pairs);
            std::set<std::pair<Point, Point>> special;
            for (const auto& v : sr.violations) special.emplace(v.x, v.y);
            for (const auto& v : gr.violations) pairwise_failures += special.contains({v.x, v.y}) ? 0 : 1;
            if (sr.verdict == Verdict::Satisfied) {
                ++special_satisfied;
                if (gr.verdict != Verdict::Satisfied && gr.verdict != Verdict::Vacuous) ++implication_failures;
            }
        }
    }
    return {implication_failures == 0 && pairwise_failures == 0 && special_satisfied > 0,
            (Detail() << runs << " family/map runs on 36 pairs each, " << special_satisfied
                      << " with special satisfied, " << implication_failures << " implication failures, "
                      << pairwise_failures << " pairwise failures")
                .str()};
}

struct CatalogMap {
    std::string name;
    SelfMap map;
    std::vector<Point> starts;
};

std::vector<CatalogMap> catalog_maps() {
    const std::vector<Point> unit{Point::at(0.0), Point::at(0.5), Point::at(1.0)};
    const auto box = MetricSpace::box({0, 0}, {1, 1});
    return {
        {"x/2", interval_map("x/2"), unit},
        {"cos(x)", interval_map("cos(x)"), unit},
        {"x/4 + 0.3", interval_map("x/4 + 0.3"), unit},
        {"sin(x)/2 + 0.25", interval_map("sin(x)/2 + 0.25"), unit},
        {"(x2/2, x1/2 + 0.25)", SelfMap::expression(box, {ex("x2/2", 2), ex("x1/2 + 0.25", 2)}),
         {Point::at({0.0, 0.0}), Point::at({0.5, 0.5}), Point::at({1.0, 1.0})}},
    };
}

Outcome ac8() {
    std::size_t agreeing = 0;
    const auto maps = catalog_maps();
    for (const auto& c : maps) {
        const auto u = uniqueness_probe(c.map, c.starts, {1e-12, 1e-9, 10000, 100}, 1e-6, 0);
        agreeing += u.unique && u.max_pairwise <= 1e-6 ? 1 : 0;
    }
    const std::vector<Point> starts{Point::at(0.0), Point::at(0.5), Point::at(1.0)};
    const auto id = uniqueness_probe(interval_map("x"), starts, {}, 1e-6, 0);
    const bool flagged = id.all_converged && !id.agree && !id.unique;
    return {agreeing == maps.size() && flagged,
            (Detail() << agreeing << "/" << maps.size() << " contractive maps agree within 1e-6; identity "
                      << (flagged ? "flagged non-unique" : "not flagged"))
                .str()};
}

Outcome ac9() {
    std::size_t verified = 0, runs = 0, monotone = 0;
    for (const auto& c : catalog_maps()) {
        const auto pairs = make_pair_set(c.map.space(), {c.map.space().dimension() == 1 ? 100u : 20u, 500, 9});
        const auto r = check_special(c.map, SpecialCondition::banach(0.9), pairs);
        if (r.verdict != Verdict::Satisfied) continue;
        ++verified;
        for (const auto& s : c.starts) {
            const auto run = picard_solve(c.map, s, {1e-12, 1e-9, 10000, 10000});
            if (!run.converged) continue;
            ++runs;
            monotone += run.monotone_decrease ? 1 : 0;
        }
    }

    const std::size_t n = 5000;
    std::vector<double> x(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = acc += 1.0 / static_cast<double>(i + 1);
    const auto grid = default_epsilon_grid();
    const auto d = cauchy_diagnostic([&](std::size_t i, std::size_t j) { return std::abs(x[i] - x[j]); }, n, grid);
    bool witnesses_ok = !d.witnesses.empty();
    for (const auto& w : d.witnesses) {
        witnesses_ok = witnesses_ok && w.m > w.n && w.n > w.k && w.d_mn >= 0.5 && w.d_prev_n < 0.5;
    }
    const bool cauchy_ok = !d.is_cauchy_within_budget && d.epsilon0 == 0.5 && witnesses_ok && d.final_step < 1e-3;
    return {verified > 0 && runs > 0 && monotone == runs && cauchy_ok,
            (Detail() << verified << " maps verified (banach 0.9), " << monotone << "/" << runs
                      << " converged runs monotone; harmonic sums: epsilon0="
                      << (d.epsilon0 ? *d.epsilon0 : -1.0) << ", " << d.witnesses.size()
                      << " witnesses, final step " << d.final_step)
                .str()};
}

Outcome ac10() {
    using fixpoint::cli::parse_config_text;
    const std::string check_cfg = R"j({
      "space": {"kind": "box", "lower": [0, 0], "upper": [1, 1], "norm": "l2"},
      "map": {"expr": ["x2/2 + x1^2/4", "sin(x1)/3"]},
      "condition": {"general": {"psi": "t^2", "phi": "t1^2/2", "g": ["max(t1, t2, t3, (t4 + t5)/2)"]}},
      "sampling": {"grid_resolution": 20, "random_pairs": 2000, "seed": 10}
    })j";
    const std::string solve_cfg = R"j({
      "space": {"kind": "interval", "lower": 0, "upper": 1},
      "map": {"expr": "cos(x)"},
      "solver": {"starts": [0, 0.25, 0.5, 0.75, 1], "tol": 1e-12}
    })j";
    bool identical = true;
    for (const auto* text : {&check_cfg, &solve_cfg}) {
        const auto a = parse_config_text(*text);
        const auto b = parse_config_text(*text);
        const bool is_check = text == &check_cfg;
        const auto ra = is_check ? cli::cmd_check(a, 0) : cli::cmd_solve(a, 0);
        const auto rb = is_check ? cli::cmd_check(b, 8) : cli::cmd_solve(b, 8);
        identical = identical && ra.exit_code == rb.exit_code && cli::render(ra.report) == cli::render(rb.report);
    }
    return {identical, identical ? "check and solve reports byte-identical at 0 and 8 threads"
                                 : "reports differ between 0 and 8 threads"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%-5s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

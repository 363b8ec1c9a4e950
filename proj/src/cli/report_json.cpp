#include "fixpoint/cli/report_json.hpp"

#include <cmath>

namespace fixpoint::cli {

using nlohmann::json;

namespace {

json numbers(std::span<const double> values) {
    json out = json::array();
    for (double v : values) out.push_back(number_json(v));
    return out;
}

json m_json(const MVector& m) {
    return {{"d_x_y", number_json(m[0])},  {"d_y_Ty", number_json(m[1])}, {"d_x_Tx", number_json(m[2])},
            {"d_x_Ty", number_json(m[3])}, {"d_y_Tx", number_json(m[4])}};
}

json pair_json(const PairRecord& p) {
    return {{"x", point_json(p.x)},
            {"y", point_json(p.y)},
            {"lhs", number_json(p.lhs)},
            {"rhs", number_json(p.rhs)},
            {"margin", number_json(p.rhs - p.lhs)},
            {"m", m_json(p.m)}};
}

json dominance_record(const DominanceRecord& r) {
    return {{"tuple", numbers(r.tuple)},
            {"phi", number_json(r.phi)},
            {"psi_of_max", number_json(r.psi_of_max)},
            {"gap", number_json(r.gap)}};
}

}  // namespace

json number_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json point_json(const Point& p) {
    if (p.is_indexed()) return p.index;
    if (p.coords.size() == 1) return number_json(p.coords[0]);
    return numbers(p.coords);
}

json to_json(const ValidationReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations) {
        json witness = json::array();
        for (const auto& p : v.witness) witness.push_back(point_json(p));
        violations.push_back({{"axiom", v.axiom},
                              {"witness", witness},
                              {"lhs", number_json(v.lhs)},
                              {"rhs", number_json(v.rhs)}});
    }
    return {{"valid", r.valid},
            {"exhaustive", r.exhaustive},
            {"triples_checked", r.triples_checked},
            {"violation_count", r.violation_count},
            {"violations", violations}};
}

json to_json(const MembershipReport& r) {
    json axioms = json::array();
    for (const auto& a : r.axioms) {
        axioms.push_back({{"axiom", a.axiom},
                          {"status", to_string(a.status)},
                          {"detail", a.detail},
                          {"witness", numbers(a.witness)},
                          {"evaluations", a.evaluations}});
    }
    return {{"class", r.function_class}, {"passed", r.passed}, {"axioms", axioms}};
}

json to_json(const DominanceReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back(dominance_record(v));
    json ties = json::array();
    for (const auto& t : r.near_ties) ties.push_back(dominance_record(t));
    json out = {{"passed", r.passed},
                {"tuples_checked", r.tuples_checked},
                {"violation_count", r.violation_count},
                {"near_tie_count", r.near_tie_count},
                {"indeterminate_count", r.indeterminate_count},
                {"violations", violations},
                {"near_ties", ties}};
    if (!r.first_error.empty()) out["first_error"] = r.first_error;
    return out;
}

json to_json(const ConditionReport& r, std::size_t violation_cap) {
    json violations = json::array();
    for (std::size_t i = 0; i < r.violations.size() && i < violation_cap; ++i) violations.push_back(pair_json(r.violations[i]));
    json ties = json::array();
    for (const auto& t : r.near_ties) ties.push_back(pair_json(t));
    json indeterminate = json::array();
    for (const auto& i : r.indeterminate) {
        indeterminate.push_back({{"x", point_json(i.x)}, {"y", point_json(i.y)}, {"error", i.error}});
    }
    json out = {{"verdict", to_string(r.verdict)},
                {"pairs_checked", r.pairs_checked},
                {"gate_passed", r.gate_passed},
                {"clamp_events", r.clamp_events},
                {"violation_count", r.violations.size()},
                {"violations", violations},
                {"violations_truncated", r.violations.size() > violation_cap},
                {"near_tie_count", r.near_tie_count},
                {"near_ties", ties},
                {"indeterminate", indeterminate}};
    if (r.verdict == Verdict::Satisfied) {
        out["note"] = "no violation found on " + std::to_string(r.pairs_checked) + " pairs";
    }
    return out;
}

json to_json(const SolveReport& r) {
    json out = {{"converged", r.converged},
                {"fixed_point", point_json(r.fixed_point)},
                {"iterations", r.iterations},
                {"residual", number_json(r.residual)},
                {"step_trace", numbers(r.step_trace)},
                {"trace_truncated", r.trace_truncated},
                {"monotone_decrease", r.monotone_decrease},
                {"clamp_events", r.clamp_events},
                {"stop", to_string(r.stop)}};
    if (!r.error.empty()) out["error"] = r.error;
    return out;
}

json to_json(const UniquenessReport& r) {
    json runs = json::array();
    for (const auto& run : r.runs) runs.push_back(to_json(run));
    json distances = json::array();
    for (const auto& row : r.distances) {
        json line = json::array();
        for (const auto& d : row) line.push_back(d ? number_json(*d) : json(nullptr));
        distances.push_back(line);
    }
    return {{"runs", runs},
            {"nonconvergent", r.nonconvergent},
            {"distances", distances},
            {"max_pairwise", number_json(r.max_pairwise)},
            {"all_converged", r.all_converged},
            {"agree", r.agree},
            {"unique", r.unique}};
}

json to_json(const CauchyDiagnostic& d) {
    json witnesses = json::array();
    for (const auto& w : d.witnesses) {
        witnesses.push_back({{"k", w.k},
                             {"m", w.m},
                             {"n", w.n},
                             {"d_m_n", number_json(w.d_mn)},
                             {"d_m_minus_1_n", number_json(w.d_prev_n)}});
    }
    return {{"is_cauchy_within_budget", d.is_cauchy_within_budget},
            {"epsilon0", d.epsilon0 ? number_json(*d.epsilon0) : json(nullptr)},
            {"witnesses", witnesses},
            {"tail_diameter", number_json(d.tail_diameter)},
            {"tail_start", d.tail_start},
            {"final_step", number_json(d.final_step)}};
}

json to_json(const GeneralCondition& c) {
    json gs = json::array();
    for (const auto& g : c.gs) gs.push_back(g.describe());
    return {{"psi", c.psi.describe()}, {"phi", c.phi.describe()}, {"g", gs}, {"alpha", c.alpha}};
}

}  // namespace fixpoint::cli

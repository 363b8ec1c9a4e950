#include "fixpoint/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include "fixpoint/cli/report_json.hpp"

namespace fixpoint::cli {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

json envelope(const ProblemConfig& cfg, std::string_view command) {
    return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", cfg.resolved}};
}

const MetricSpace& need_space(const ProblemConfig& cfg, std::string_view command) {
    if (!cfg.space) throw ConfigError("config field 'space': required by " + std::string(command));
    return *cfg.space;
}

const SelfMap& need_map(const ProblemConfig& cfg, std::string_view command) {
    need_space(cfg, command);
    if (!cfg.map) throw ConfigError("config field 'map': required by " + std::string(command));
    return *cfg.map;
}

const Condition& need_condition(const ProblemConfig& cfg, std::string_view command) {
    if (!cfg.condition) throw ConfigError("config field 'condition': required by " + std::string(command));
    return *cfg.condition;
}

PsiGrid psi_grid_for(const AlteringDistance& psi) {
    PsiGrid grid;
    grid.t_max = std::min(psi.domain_max(), grid.t_max);
    return grid;
}

CheckOptions check_options(const ProblemConfig& cfg, std::size_t threads) {
    return {cfg.sampling.near_tie_tolerance, threads};
}

PairSet pairs_for(const ProblemConfig& cfg) {
    return make_pair_set(*cfg.space, {cfg.sampling.grid_resolution, cfg.sampling.random_pairs, cfg.sampling.seed});
}

json pair_set_json(const PairSet& p) {
    return {{"total", p.pairs.size()},
            {"exhaustive", p.exhaustive},
            {"grid_pairs", p.grid_pairs},
            {"random_pairs", p.random_pairs}};
}

std::string verdict_line(std::string_view label, const ConditionReport& r) {
    std::string line = std::string(label) + ": " + std::string(to_string(r.verdict)) + " on " +
                       std::to_string(r.pairs_checked) + " pairs (" + std::to_string(r.gate_passed) + " gated in";
    if (!r.violations.empty()) {
        line += ", " + std::to_string(r.violations.size()) + " violations, first at (" + to_string(r.violations[0].x) +
                ", " + to_string(r.violations[0].y) + ")";
    }
    return line + ")";
}

}  // namespace

CommandResult cmd_check(const ProblemConfig& cfg, std::size_t threads) {
    const SelfMap& map = need_map(cfg, "check");
    const Condition& condition = need_condition(cfg, "check");
    const MetricSpace& space = map.space();
    const auto& s = cfg.sampling;

    CommandResult out;
    out.report = envelope(cfg, "check");
    const ValidationReport metric = validate_metric(space, s.metric_samples, s.seed);
    out.report["metric"] = to_json(metric);
    bool classes_ok = metric.valid;

    const PairSet pairs = pairs_for(cfg);
    out.report["pairs"] = pair_set_json(pairs);
    ConditionReport result;
    json classes;
    json cond;
    if (const auto* general = std::get_if<GeneralCondition>(&condition)) {
        const MembershipReport psi = verify_psi_membership(general->psi, psi_grid_for(general->psi));
        const MembershipReport phi = verify_phi_membership(general->phi, s.phi_limits, s.seed, s.phi_directions);
        json gs = json::array();
        classes_ok = classes_ok && psi.passed && phi.passed;
        for (const auto& g : general->gs) {
            const MembershipReport r = verify_g_membership(g, s.class_samples, s.seed);
            classes_ok = classes_ok && r.passed;
            gs.push_back(to_json(r));
        }
        const DominanceReport dom = verify_dominance({general->psi, general->phi}, {s.class_samples, s.seed, 1e-12, 10.0});
        classes_ok = classes_ok && dom.passed;
        classes = {{"psi", to_json(psi)}, {"phi", to_json(phi)}, {"g", gs}, {"dominance", to_json(dom)}};
        result = check_general(map, *general, pairs, check_options(cfg, threads));
        cond = to_json(*general);
        cond["kind"] = "general";
    } else {
        const auto& special = std::get<SpecialCondition>(condition);
        const MembershipReport psi = verify_psi_membership(special.psi(), psi_grid_for(special.psi()));
        classes_ok = classes_ok && psi.passed;
        classes = {{"psi", to_json(psi)}};
        result = check_special(map, special, pairs, check_options(cfg, threads));
        cond = {{"kind", "special"}, {"family", to_string(special.family())}, {"description", special.describe()}};
    }
    out.report["classes"] = classes;
    out.report["condition"] = cond;
    out.report["result"] = to_json(result);

    if (!classes_ok) {
        out.exit_code = kExitClassFailure;
    } else if (result.verdict == Verdict::Violated || result.verdict == Verdict::Indeterminate) {
        out.exit_code = kExitNegative;
    }
    out.report["exit_code"] = out.exit_code;
    out.summary = verdict_line("check", result) + (classes_ok ? "" : "; class or metric check failed");
    return out;
}

CommandResult cmd_solve(const ProblemConfig& cfg, std::size_t threads) {
    const SelfMap& map = need_map(cfg, "solve");
    if (!cfg.solver) throw ConfigError("config field 'solver': required by solve");
    const SolverConfig& sc = *cfg.solver;

    CommandResult out;
    out.report = envelope(cfg, "solve");
    std::vector<SolveReport> runs;
    json solve;
    if (sc.starts.size() == 1) {
        runs.push_back(picard_solve(map, sc.starts[0], sc.options));
        solve["runs"] = json::array({to_json(runs[0])});
    } else {
        UniquenessReport u = uniqueness_probe(map, sc.starts, sc.options, sc.agreement_tol, threads);
        solve = to_json(u);
        runs = std::move(u.runs);
        out.report["uniqueness"] = {{"unique", solve["unique"]},
                                    {"agree", solve["agree"]},
                                    {"max_pairwise", solve["max_pairwise"]},
                                    {"distances", solve["distances"]},
                                    {"nonconvergent", solve["nonconvergent"]}};
        solve = {{"runs", solve["runs"]}};
    }

    const std::vector<double> grid = default_epsilon_grid();
    json cauchy = json::array();
    bool all_converged = true;
    std::size_t converged = 0;
    for (const auto& r : runs) {
        all_converged = all_converged && r.converged;
        converged += r.converged ? 1 : 0;
        if (r.iterates.size() >= 3) {
            cauchy.push_back(to_json(cauchy_diagnostic(r, map.space(), grid)));
        } else {
            cauchy.push_back(nullptr);
        }
    }
    solve["cauchy"] = cauchy;
    out.report["solve"] = solve;
    out.exit_code = all_converged ? kExitOk : kExitNegative;
    out.report["exit_code"] = out.exit_code;
    out.summary = "solve: " + std::to_string(converged) + "/" + std::to_string(runs.size()) + " runs converged";
    if (runs.size() == 1) {
        out.summary += ", x = " + to_string(runs[0].fixed_point) + " after " + std::to_string(runs[0].iterations) +
                       " iterations";
    }
    return out;
}

CommandResult cmd_verify_class(const ProblemConfig& cfg, std::size_t) {
    if (!cfg.function) throw ConfigError("config field 'function': required by verify-class");
    const FunctionConfig& f = *cfg.function;
    MembershipReport r;
    if (f.psi) {
        r = verify_psi_membership(*f.psi, f.psi_grid);
    } else if (f.phi) {
        r = verify_phi_membership(*f.phi, f.samples, f.seed, f.directions);
    } else {
        r = verify_g_membership(*f.g, f.samples, f.seed);
    }
    CommandResult out;
    out.report = envelope(cfg, "verify-class");
    out.report["membership"] = to_json(r);
    out.exit_code = r.passed ? kExitOk : kExitNegative;
    out.report["exit_code"] = out.exit_code;
    out.summary = "verify-class " + f.function_class + ": " + (r.passed ? "pass" : "fail");
    for (const auto& a : r.axioms) {
        if (a.status != AxiomStatus::Pass) out.summary += "; " + a.axiom + " " + to_string(a.status);
    }
    return out;
}

CommandResult cmd_reduce(const ProblemConfig& cfg, std::size_t threads) {
    const Condition& condition = need_condition(cfg, "reduce");
    const auto* special = std::get_if<SpecialCondition>(&condition);
    if (!special) throw ConfigError("config field 'condition.family': reduce needs a special family");
    const auto& s = cfg.sampling;

    const Reduction red = reduce_to_general(*special, {s.class_samples, s.class_samples, s.seed, 10.0}, cfg.reduction_alpha);
    CommandResult out;
    out.report = envelope(cfg, "reduce");
    json g_membership = json::array();
    for (const auto& g : red.g_membership) g_membership.push_back(to_json(g));
    out.report["reduction"] = {{"family", to_string(special->family())},
                               {"special", special->describe()},
                               {"general", to_json(red.general)},
                               {"dominance", to_json(red.dominance)},
                               {"g_membership", g_membership},
                               {"invariants_hold", red.invariants_hold}};
    out.summary = "reduce " + std::string(to_string(special->family())) + ": invariants " +
                  (red.invariants_hold ? "hold" : "fail");

    if (cfg.map) {
        const PairSet pairs = pairs_for(cfg);
        const ConditionReport sr = check_special(*cfg.map, *special, pairs, check_options(cfg, threads));
        const ConditionReport gr = check_general(*cfg.map, red.general, pairs, check_options(cfg, threads));
        std::set<std::pair<Point, Point>> special_violations;
        for (const auto& v : sr.violations) special_violations.emplace(v.x, v.y);
        json counterexamples = json::array();
        for (const auto& v : gr.violations) {
            if (!special_violations.contains({v.x, v.y}) && counterexamples.size() < 100) {
                counterexamples.push_back({{"x", point_json(v.x)}, {"y", point_json(v.y)}});
            }
        }
        std::size_t escaped = 0;
        for (const auto& v : gr.violations) escaped += special_violations.contains({v.x, v.y}) ? 0 : 1;
        const bool holds = escaped == 0;
        out.report["cross_check"] = {{"pairs", pair_set_json(pairs)},
                                     {"special", to_json(sr)},
                                     {"general", to_json(gr)},
                                     {"implication_holds", holds},
                                     {"implication_failures", escaped},
                                     {"implication_counterexamples", counterexamples}};
        out.exit_code = holds ? kExitOk : kExitNegative;
        out.summary += "; special " + std::string(to_string(sr.verdict)) + ", general " +
                       std::string(to_string(gr.verdict)) + ", implication " + (holds ? "holds" : "FAILS");
    }
    out.report["exit_code"] = out.exit_code;
    return out;
}

std::size_t threads_from_environment() {
    if (const char* env = std::getenv("FIXPOINT_LAB_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

int run(int argc, char** argv) {
    CLI::App app{"Fixed-point laboratory: contraction checks, Picard iteration and function-class verification"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    bool quiet = false;
    app.add_option("--config", config_path, "Problem file (JSON)")->required();
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.add_option("--seed", seed, "Override the sampling seed");
    app.add_option("--alpha", alpha, "Override the gate parameter");
    app.add_flag("--quiet", quiet, "Suppress the summary line");

    auto* check = app.add_subcommand("check", "Check a contraction condition over a pair set");
    auto* solve = app.add_subcommand("solve", "Picard iteration with convergence diagnostics");
    auto* verify = app.add_subcommand("verify-class", "Check a function against the psi, phi or g class");
    auto* reduce = app.add_subcommand("reduce", "Rewrite a special condition in generalized form and cross-check it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    CommandResult result;
    try {
        const ProblemConfig cfg = load_config(config_path, {seed, alpha, out_path});
        const std::size_t threads = threads_from_environment();
        if (check->parsed()) {
            result = cmd_check(cfg, threads);
        } else if (solve->parsed()) {
            result = cmd_solve(cfg, threads);
        } else if (verify->parsed()) {
            result = cmd_verify_class(cfg, threads);
        } else if (reduce->parsed()) {
            result = cmd_reduce(cfg, threads);
        }
        const std::string text = render(result.report);
        if (cfg.output_path) {
            std::ofstream file(*cfg.output_path);
            if (!file) throw ConfigError("config field 'output.path': cannot write '" + *cfg.output_path + "'");
            file << text;
            if (!quiet) std::cout << result.summary << "\n";
        } else {
            std::cout << text;
            if (!quiet) std::cerr << result.summary << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return result.exit_code;
}

}  // namespace fixpoint::cli

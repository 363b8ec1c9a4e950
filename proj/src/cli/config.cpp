#include "fixpoint/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace fixpoint::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError("config field '" + path + "': " + message);
}

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void expect_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(join(path, key), "unknown field");
    }
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

std::uint64_t as_unsigned(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) fail(path, "must be nonnegative");
    fail(path, "expected a nonnegative integer");
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

const json& required(const json& obj, std::string_view key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "required");
    return *it;
}

double number_or(json& obj, std::string_view key, const std::string& path, double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        obj[std::string(key)] = fallback;
        return fallback;
    }
    return as_number(*it, join(path, key));
}

std::uint64_t unsigned_or(json& obj, std::string_view key, const std::string& path, std::uint64_t fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        obj[std::string(key)] = fallback;
        return fallback;
    }
    return as_unsigned(*it, join(path, key));
}

json& object_or_empty(json& parent, std::string_view key, const std::string& path) {
    json& child = parent[std::string(key)];
    if (child.is_null()) child = json::object();
    expect_object(child, join(path, key));
    return child;
}

expr::Expr parse_expr(const json& j, std::size_t arity, const std::string& path) {
    const std::string source = as_string(j, path);
    try {
        return expr::parse(source, arity);
    } catch (const expr::ParseError& e) {
        fail(path, e.what());
    }
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], join(path, i)));
    return out;
}

MetricSpace parse_space(json& obj, const std::string& path) {
    expect_object(obj, path);
    const std::string kind = as_string(required(obj, "kind", path), join(path, "kind"));
    try {
        if (kind == "interval") {
            expect_keys(obj, path, {"kind", "lower", "upper"});
            return MetricSpace::interval(as_number(required(obj, "lower", path), join(path, "lower")),
                                         as_number(required(obj, "upper", path), join(path, "upper")));
        }
        if (kind == "box") {
            expect_keys(obj, path, {"kind", "lower", "upper", "norm"});
            auto lower = number_list(required(obj, "lower", path), join(path, "lower"));
            auto upper = number_list(required(obj, "upper", path), join(path, "upper"));
            if (!obj.contains("norm")) obj["norm"] = "l2";
            const std::string norm = as_string(obj["norm"], join(path, "norm"));
            Norm n = Norm::L2;
            if (norm == "l1") {
                n = Norm::L1;
            } else if (norm == "linf") {
                n = Norm::LInf;
            } else if (norm != "l2") {
                fail(join(path, "norm"), "expected \"l1\", \"l2\" or \"linf\"");
            }
            return MetricSpace::box(std::move(lower), std::move(upper), n);
        }
        if (kind == "finite") {
            expect_keys(obj, path, {"kind", "matrix"});
            const json& m = required(obj, "matrix", path);
            const std::string mpath = join(path, "matrix");
            if (!m.is_array() || m.empty()) fail(mpath, "expected a nonempty array of rows");
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < m.size(); ++i) rows.push_back(number_list(m[i], join(mpath, i)));
            return MetricSpace::finite(std::move(rows));
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(join(path, "kind"), "expected \"interval\", \"box\" or \"finite\", got \"" + kind + "\"");
}

SelfMap parse_map(const json& obj, const MetricSpace& space, const std::string& path) {
    expect_object(obj, path);
    expect_keys(obj, path, {"expr", "table"});
    if (obj.contains("expr") == obj.contains("table")) fail(path, "exactly one of 'expr' or 'table' is required");
    try {
        if (obj.contains("table")) {
            if (!space.is_finite()) fail(join(path, "table"), "tables need a finite space");
            const json& t = obj["table"];
            if (!t.is_array()) fail(join(path, "table"), "expected an array of indices");
            std::vector<std::size_t> images;
            for (std::size_t i = 0; i < t.size(); ++i) images.push_back(as_unsigned(t[i], join(join(path, "table"), i)));
            return SelfMap::table(space, std::move(images));
        }
        if (space.is_finite()) fail(join(path, "expr"), "finite spaces take a 'table'");
        const json& e = obj["expr"];
        const std::string epath = join(path, "expr");
        const std::size_t dim = space.dimension();
        std::vector<expr::Expr> components;
        if (e.is_string()) {
            if (dim != 1) fail(epath, "expected an array of " + std::to_string(dim) + " expressions");
            components.push_back(parse_expr(e, 1, epath));
        } else if (e.is_array()) {
            if (e.size() != dim) fail(epath, "expected " + std::to_string(dim) + " expressions, got " + std::to_string(e.size()));
            for (std::size_t i = 0; i < e.size(); ++i) components.push_back(parse_expr(e[i], dim, join(epath, i)));
        } else {
            fail(epath, "expected a string or an array of strings");
        }
        return SelfMap::expression(space, std::move(components));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
}

Point parse_point(const json& j, const MetricSpace& space, const std::string& path) {
    Point p;
    if (space.is_finite()) {
        p = Point::at_index(static_cast<std::size_t>(as_unsigned(j, path)));
    } else if (space.dimension() == 1 && j.is_number()) {
        p = Point::at(as_number(j, path));
    } else {
        p = Point::at(number_list(j, path));
    }
    if (!space.contains(p)) fail(path, "point " + to_string(p) + " is not in the space");
    return p;
}

/// ψ given as "t^2", {"expr": "t^2"} or {"integrand": "2*t", "t_max": 2, "subdivisions": 10000}.
AlteringDistance parse_psi(json& j, const std::string& path, double default_t_max) {
    if (j.is_string()) return AlteringDistance(parse_expr(j, 1, path));
    expect_object(j, path);
    if (j.contains("expr")) {
        expect_keys(j, path, {"expr"});
        return AlteringDistance(parse_expr(j["expr"], 1, join(path, "expr")));
    }
    expect_keys(j, path, {"integrand", "t_max", "subdivisions"});
    const expr::Expr f = parse_expr(required(j, "integrand", path), 1, join(path, "integrand"));
    const double t_max = number_or(j, "t_max", path, default_t_max);
    const auto cells = unsigned_or(j, "subdivisions", path, 10000);
    try {
        return integral_altering(f, t_max, static_cast<std::size_t>(cells));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    } catch (const DomainError& e) {
        fail(join(path, "integrand"), e.what());
    }
}

IntegralSpec parse_integral(json& obj, const std::string& path, double default_t_max) {
    IntegralSpec spec{parse_expr(required(obj, "integrand", path), 1, join(path, "integrand"))};
    spec.t_max = number_or(obj, "t_max", path, default_t_max);
    spec.subdivisions = static_cast<std::size_t>(unsigned_or(obj, "subdivisions", path, 10000));
    return spec;
}

json& default_psi(json& obj) {
    if (!obj.contains("psi")) obj["psi"] = "t";
    return obj["psi"];
}

Condition parse_special(json& obj, const std::string& path, double default_t_max) {
    const std::string name = as_string(required(obj, "family", path), join(path, "family"));
    const auto family = family_from_string(name);
    if (!family) fail(join(path, "family"), "unknown family \"" + name + "\"");
    auto number = [&](std::string_view key) { return as_number(required(obj, key, path), join(path, key)); };
    auto h = [&] { return parse_expr(required(obj, "h", path), 1, join(path, "h")); };
    auto psi = [&] { return parse_psi(default_psi(obj), join(path, "psi"), default_t_max); };
    const std::initializer_list<std::string_view> integral_keys = {"family", "alpha", "integrand", "t_max",
                                                                   "subdivisions", "beta", "k", "h"};
    try {
        switch (*family) {
            case Family::Banach:
                expect_keys(obj, path, {"family", "alpha", "beta"});
                return SpecialCondition::banach(number("beta"));
            case Family::Branciari:
                expect_keys(obj, path, integral_keys);
                return SpecialCondition::branciari(number("beta"), parse_integral(obj, path, default_t_max));
            case Family::Rhoades:
                expect_keys(obj, path, integral_keys);
                return SpecialCondition::rhoades(number("k"), parse_integral(obj, path, default_t_max));
            case Family::Djoudi:
                expect_keys(obj, path, integral_keys);
                return SpecialCondition::djoudi(h(), parse_integral(obj, path, default_t_max));
            case Family::Khan:
                expect_keys(obj, path, {"family", "alpha", "beta", "psi"});
                return SpecialCondition::khan(number("beta"), psi());
            case Family::Dutta:
                expect_keys(obj, path, {"family", "alpha", "psi", "h"});
                return SpecialCondition::dutta(psi(), h());
            case Family::Doric:
                expect_keys(obj, path, {"family", "alpha", "psi", "h"});
                return SpecialCondition::doric(psi(), h());
            case Family::Choudhury:
                expect_keys(obj, path, {"family", "alpha", "psi", "h"});
                return SpecialCondition::choudhury(psi(), h());
            case Family::Morales:
                expect_keys(obj, path, {"family", "alpha", "a", "b", "psi"});
                return SpecialCondition::morales(number("a"), number("b"), psi());
            case Family::HPsiMax:
                expect_keys(obj, path, {"family", "alpha", "psi", "h"});
                return SpecialCondition::h_psi_max(psi(), h());
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
    throw std::logic_error("unknown family");
}

Condition parse_general(json& obj, const std::string& path, double alpha, double default_t_max) {
    expect_object(obj, path);
    expect_keys(obj, path, {"psi", "phi", "g"});
    const json& g = required(obj, "g", path);
    const std::string gpath = join(path, "g");
    if (!g.is_array() || g.empty()) fail(gpath, "expected a nonempty array of expressions in t1..t5");
    std::vector<GFn> gs;
    for (std::size_t i = 0; i < g.size(); ++i) gs.emplace_back(parse_expr(g[i], 5, join(gpath, i)));

    json& phi = obj["phi"];
    const std::string ppath = join(path, "phi");
    if (phi.is_null()) fail(ppath, "required");
    std::size_t arity = gs.size();
    const json* phi_source = &phi;
    if (phi.is_object()) {
        expect_keys(phi, ppath, {"expr", "arity"});
        arity = static_cast<std::size_t>(unsigned_or(phi, "arity", ppath, gs.size()));
        phi_source = &required(phi, "expr", ppath);
    }
    ControlFn control(parse_expr(*phi_source, arity, phi.is_object() ? join(ppath, "expr") : ppath), arity);
    AlteringDistance psi = parse_psi(default_psi(obj), join(path, "psi"), default_t_max);
    try {
        return GeneralCondition(std::move(psi), std::move(control), std::move(gs), alpha);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

SamplingConfig parse_sampling(json& obj, const std::string& path) {
    expect_keys(obj, path, {"grid_resolution", "random_pairs", "seed", "metric_samples", "class_samples",
                            "phi_limits", "phi_directions", "near_tie_tolerance"});
    SamplingConfig s;
    s.grid_resolution = static_cast<std::size_t>(unsigned_or(obj, "grid_resolution", path, s.grid_resolution));
    s.random_pairs = static_cast<std::size_t>(unsigned_or(obj, "random_pairs", path, s.random_pairs));
    s.seed = unsigned_or(obj, "seed", path, s.seed);
    s.metric_samples = static_cast<std::size_t>(unsigned_or(obj, "metric_samples", path, s.metric_samples));
    s.class_samples = static_cast<std::size_t>(unsigned_or(obj, "class_samples", path, s.class_samples));
    s.phi_limits = static_cast<std::size_t>(unsigned_or(obj, "phi_limits", path, s.phi_limits));
    s.phi_directions = static_cast<std::size_t>(unsigned_or(obj, "phi_directions", path, s.phi_directions));
    s.near_tie_tolerance = number_or(obj, "near_tie_tolerance", path, s.near_tie_tolerance);
    if (s.grid_resolution == 1) fail(join(path, "grid_resolution"), "must be 0 (no grid) or at least 2");
    if (s.near_tie_tolerance < 0.0) fail(join(path, "near_tie_tolerance"), "must be nonnegative");
    return s;
}

SolverConfig parse_solver(json& obj, const MetricSpace& space, const std::string& path) {
    expect_keys(obj, path, {"x0", "starts", "tol", "tol_fp", "max_iter", "trace_cap", "agreement_tol"});
    SolverConfig s;
    if (obj.contains("x0") == obj.contains("starts")) fail(path, "exactly one of 'x0' or 'starts' is required");
    if (obj.contains("x0")) {
        s.starts.push_back(parse_point(obj["x0"], space, join(path, "x0")));
    } else {
        const json& starts = obj["starts"];
        const std::string spath = join(path, "starts");
        if (!starts.is_array() || starts.empty()) fail(spath, "expected a nonempty array of points");
        for (std::size_t i = 0; i < starts.size(); ++i) s.starts.push_back(parse_point(starts[i], space, join(spath, i)));
    }
    s.options.tol = number_or(obj, "tol", path, s.options.tol);
    s.options.tol_fp = number_or(obj, "tol_fp", path, s.options.tol_fp);
    s.options.max_iter = static_cast<std::size_t>(unsigned_or(obj, "max_iter", path, s.options.max_iter));
    s.options.trace_cap = static_cast<std::size_t>(unsigned_or(obj, "trace_cap", path, s.options.trace_cap));
    s.agreement_tol = number_or(obj, "agreement_tol", path, s.agreement_tol);
    if (!(s.options.tol > 0.0)) fail(join(path, "tol"), "must be positive");
    if (!(s.options.tol_fp > 0.0)) fail(join(path, "tol_fp"), "must be positive");
    if (s.options.max_iter == 0) fail(join(path, "max_iter"), "must be at least 1");
    if (!(s.agreement_tol > 0.0)) fail(join(path, "agreement_tol"), "must be positive");
    return s;
}

FunctionConfig parse_function(json& obj, const std::string& path, std::uint64_t default_seed) {
    FunctionConfig f;
    f.function_class = as_string(required(obj, "class", path), join(path, "class"));
    f.seed = unsigned_or(obj, "seed", path, default_seed);
    if (f.function_class == "psi") {
        expect_keys(obj, path, {"class", "seed", "expr", "integrand", "t_max", "subdivisions", "points"});
        if (obj.contains("expr") == obj.contains("integrand")) fail(path, "exactly one of 'expr' or 'integrand' is required");
        if (obj.contains("expr")) {
            f.psi = AlteringDistance(parse_expr(obj["expr"], 1, join(path, "expr")));
            f.psi_grid.t_max = number_or(obj, "t_max", path, f.psi_grid.t_max);
        } else {
            json spec = {{"integrand", obj["integrand"]}};
            spec["t_max"] = number_or(obj, "t_max", path, f.psi_grid.t_max);
            spec["subdivisions"] = unsigned_or(obj, "subdivisions", path, 10000);
            f.psi = parse_psi(spec, path, f.psi_grid.t_max);
            f.psi_grid.t_max = f.psi->domain_max();
        }
        f.psi_grid.points = static_cast<std::size_t>(unsigned_or(obj, "points", path, f.psi_grid.points));
        if (f.psi_grid.points < 3) fail(join(path, "points"), "must be at least 3");
        if (!(f.psi_grid.t_max > 0.0)) fail(join(path, "t_max"), "must be positive");
    } else if (f.function_class == "phi") {
        expect_keys(obj, path, {"class", "seed", "expr", "arity", "samples", "directions"});
        const auto arity = static_cast<std::size_t>(unsigned_or(obj, "arity", path, 1));
        if (arity == 0) fail(join(path, "arity"), "must be at least 1");
        f.phi = ControlFn(parse_expr(required(obj, "expr", path), arity, join(path, "expr")), arity);
        f.samples = static_cast<std::size_t>(unsigned_or(obj, "samples", path, 1000));
        f.directions = static_cast<std::size_t>(unsigned_or(obj, "directions", path, f.directions));
    } else if (f.function_class == "g") {
        expect_keys(obj, path, {"class", "seed", "expr", "samples"});
        f.g = GFn(parse_expr(required(obj, "expr", path), 5, join(path, "expr")));
        f.samples = static_cast<std::size_t>(unsigned_or(obj, "samples", path, f.samples));
    } else {
        fail(join(path, "class"), "expected \"psi\", \"phi\" or \"g\"");
    }
    return f;
}

}  // namespace

ProblemConfig parse_config(const nlohmann::json& input, const Overrides& overrides) {
    if (!input.is_object()) throw ConfigError("config: top level must be an object");
    ProblemConfig cfg;
    cfg.resolved = input;
    json& root = cfg.resolved;
    expect_keys(root, "", {"space", "map", "condition", "sampling", "solver", "function", "output"});

    json& sampling = object_or_empty(root, "sampling", "");
    if (overrides.seed) sampling["seed"] = *overrides.seed;
    cfg.sampling = parse_sampling(sampling, "sampling");

    if (root.contains("space")) cfg.space = parse_space(root["space"], "space");
    if (root.contains("map")) {
        if (!cfg.space) fail("map", "a map needs a 'space'");
        cfg.map = parse_map(root["map"], *cfg.space, "map");
    }

    if (root.contains("condition")) {
        json& c = root["condition"];
        expect_object(c, "condition");
        if (overrides.alpha) c["alpha"] = *overrides.alpha;
        cfg.reduction_alpha = number_or(c, "alpha", "condition", 0.5);
        double default_t_max = 10.0;
        if (cfg.space) {
            const double diam = cfg.space->diameter();
            default_t_max = diam > 0.0 ? diam : 1.0;
        }
        if (c.contains("general")) {
            if (c.contains("family")) fail("condition", "give either 'family' or 'general', not both");
            expect_keys(c, "condition", {"general", "alpha"});
            cfg.condition = parse_general(c["general"], "condition.general", cfg.reduction_alpha, default_t_max);
        } else {
            cfg.condition = parse_special(c, "condition", default_t_max);
            if (!(cfg.reduction_alpha > 0.0 && cfg.reduction_alpha <= 0.5)) {
                fail("condition.alpha", "must lie in (0, 1/2]");
            }
        }
    } else if (overrides.alpha) {
        fail("condition.alpha", "--alpha given but the config has no condition");
    }

    if (root.contains("solver")) {
        if (!cfg.map) fail("solver", "the solver needs a 'space' and a 'map'");
        json& s = root["solver"];
        expect_object(s, "solver");
        cfg.solver = parse_solver(s, *cfg.space, "solver");
    }

    if (root.contains("function")) {
        json& f = root["function"];
        expect_object(f, "function");
        if (overrides.seed) f["seed"] = *overrides.seed;
        cfg.function = parse_function(f, "function", cfg.sampling.seed);
    }

    if (overrides.out || root.contains("output")) {
        json& out = object_or_empty(root, "output", "");
        expect_keys(out, "output", {"path", "format"});
        if (overrides.out) out["path"] = *overrides.out;
        if (!out.contains("format")) out["format"] = "json";
        if (as_string(out["format"], "output.format") != "json") fail("output.format", "only \"json\" is supported");
        if (out.contains("path")) cfg.output_path = as_string(out["path"], "output.path");
    }
    return cfg;
}

ProblemConfig parse_config_text(const std::string& text, const Overrides& overrides) {
    json input;
    try {
        input = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(input, overrides);
}

ProblemConfig load_config(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), overrides);
}

}  // namespace fixpoint::cli

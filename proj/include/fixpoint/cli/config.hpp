#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fixpoint/conditions.hpp"
#include "fixpoint/function_classes.hpp"
#include "fixpoint/metric.hpp"
#include "fixpoint/solver.hpp"

namespace fixpoint::cli {

/// Malformed or inconsistent problem file. The message names the field
/// (`condition.beta`) or the JSON line and column.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SamplingConfig {
    std::size_t grid_resolution = 100;
    std::size_t random_pairs = 1000;
    std::uint64_t seed = 0;
    /// Triples for continuum metric validation and finite spaces too large to enumerate.
    std::size_t metric_samples = 10000;
    /// Samples for g membership and dominance.
    std::size_t class_samples = 10000;
    /// Limit points for the φ upper-limit check, each approached from several directions.
    std::size_t phi_limits = 1000;
    std::size_t phi_directions = 4;
    double near_tie_tolerance = 1e-12;
};

struct SolverConfig {
    SolveOptions options;
    std::vector<Point> starts;
    double agreement_tol = 1e-6;
};

/// Function under test for verify-class.
struct FunctionConfig {
    std::string function_class;  // "psi", "phi" or "g"
    std::optional<AlteringDistance> psi;
    std::optional<ControlFn> phi;
    std::optional<GFn> g;
    PsiGrid psi_grid;
    std::size_t samples = 10000;
    std::size_t directions = 4;
    std::uint64_t seed = 0;
};

using Condition = std::variant<GeneralCondition, SpecialCondition>;

struct ProblemConfig {
    /// Input with overrides applied and every default that was used filled in.
    nlohmann::json resolved;

    std::optional<MetricSpace> space;
    std::optional<SelfMap> map;
    std::optional<Condition> condition;
    /// α used when a special condition is rewritten in generalized form.
    double reduction_alpha = 0.5;
    SamplingConfig sampling;
    std::optional<SolverConfig> solver;
    std::optional<FunctionConfig> function;
    std::optional<std::string> output_path;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::optional<std::string> out;
};

ProblemConfig parse_config(const nlohmann::json& input, const Overrides& overrides = {});
ProblemConfig parse_config_text(const std::string& text, const Overrides& overrides = {});
ProblemConfig load_config(const std::string& path, const Overrides& overrides = {});

}  // namespace fixpoint::cli

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fixpoint/metric.hpp"

namespace fixpoint {

struct SolveOptions {
    /// Stop once d(x_n, x_{n+1}) < tol.
    double tol = 1e-10;
    /// Declare convergence only if the final residual d(x, Tx) <= tol_fp.
    double tol_fp = 1e-9;
    std::size_t max_iter = 10000;
    /// Iterates kept for diagnostics; step distances are always kept.
    std::size_t trace_cap = 10000;
};

enum class StopReason { StepBelowTolerance, MaxIterations, ApplyFailed };

std::string_view to_string(StopReason r);

struct SolveReport {
    bool converged = false;
    /// Final iterate; the fixed point when converged.
    Point fixed_point;
    std::size_t iterations = 0;
    /// d(x*, Tx*) at the final iterate.
    double residual = 0.0;
    /// step_trace[n] = d(x_n, x_{n+1}); one entry per iteration.
    std::vector<double> step_trace;
    /// x_0, x_1, … up to trace_cap points.
    std::vector<Point> iterates;
    bool trace_truncated = false;
    /// Steps strictly decreased while at or above tol, and never grew.
    bool monotone_decrease = true;
    std::size_t clamp_events = 0;
    StopReason stop = StopReason::MaxIterations;
    std::string error;
};

/// Plain Picard iteration x_{n+1} = T x_n from x0.
///
/// Iterates until a step falls below `tol` or max_iter steps are taken,
/// then measures the residual at the last iterate. No acceleration is
/// applied, so the recorded step sequence is the one the contraction
/// argument talks about.
SolveReport picard_solve(const SelfMap& map, const Point& x0, const SolveOptions& options);

struct UniquenessReport {
    std::vector<SolveReport> runs;  // in start order
    std::vector<std::size_t> nonconvergent;
    /// distances[i][j] between final iterates of converged runs i and j.
    std::vector<std::vector<std::optional<double>>> distances;
    double max_pairwise = 0.0;
    bool all_converged = false;
    /// Every pair of converged runs agrees within agreement_tol.
    bool agree = false;
    /// all_converged && agree.
    bool unique = false;
};

/// Runs picard_solve from each start (independently, up to `threads` at a
/// time) and compares the limits.
UniquenessReport uniqueness_probe(const SelfMap& map, std::span<const Point> starts, const SolveOptions& options,
                                  double agreement_tol, std::size_t threads = 0);

struct CauchyWitness {
    std::size_t k = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    double d_mn = 0.0;         // d(x_m, x_n) >= epsilon0
    double d_prev_n = 0.0;     // d(x_{m-1}, x_n) < epsilon0
};

struct CauchyDiagnostic {
    bool is_cauchy_within_budget = true;
    std::optional<double> epsilon0;
    std::vector<CauchyWitness> witnesses;
    /// Largest d(x_m, x_n) with m > n > tail_start.
    double tail_diameter = 0.0;
    std::size_t tail_start = 0;
    /// d(x_{N-2}, x_{N-1}).
    double final_step = 0.0;
};

using IndexDistance = std::function<double(std::size_t, std::size_t)>;

/// Looks for the structured non-Cauchy pattern in a finite prefix x_0..x_{N-1}.
///
/// The tail starts at k* = (N-1)/2. An ε admits a witness when some
/// m > n > k* has d(x_m, x_n) >= ε; epsilon0 is the largest such ε in the
/// grid. For sampled k <= k*, a witness takes the first n > k that has a
/// far point and the first such m > n, so d(x_{m-1}, x_n) < ε. The
/// prefix counts as Cauchy within budget when no grid ε admits a witness.
CauchyDiagnostic cauchy_diagnostic(const IndexDistance& distance, std::size_t prefix_length,
                                   std::span<const double> epsilon_grid);

/// Convenience overload over a solver trace.
CauchyDiagnostic cauchy_diagnostic(const SolveReport& report, const MetricSpace& space,
                                   std::span<const double> epsilon_grid);

/// 2, 1, 0.5, 0.25, 0.1, 0.05, 0.01, 0.005, 0.001.
std::vector<double> default_epsilon_grid();

}  // namespace fixpoint

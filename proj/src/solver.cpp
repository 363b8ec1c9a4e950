#include "fixpoint/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixpoint/parallel.hpp"

namespace fixpoint {

namespace {

constexpr std::size_t kWitnessSamples = 10;

}  // namespace

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::StepBelowTolerance:
            return "step_below_tolerance";
        case StopReason::MaxIterations:
            return "max_iterations";
        case StopReason::ApplyFailed:
            return "apply_failed";
    }
    return "?";
}

SolveReport picard_solve(const SelfMap& map, const Point& x0, const SolveOptions& options) {
    if (!(options.tol > 0.0) || !(options.tol_fp > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (options.max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
    const MetricSpace& space = map.space();
    space.require_member(x0);

    SolveReport report;
    auto keep = [&](const Point& p) {
        if (report.iterates.size() < options.trace_cap) {
            report.iterates.push_back(p);
        } else {
            report.trace_truncated = true;
        }
    };

    Point x = x0;
    keep(x);
    try {
        while (report.iterations < options.max_iter) {
            MapImage next = map.image(x);
            report.clamp_events += next.clamped ? 1 : 0;
            const double step = space.distance(x, next.point);
            if (!report.step_trace.empty()) {
                const double prev = report.step_trace.back();
                const bool ok = prev >= options.tol ? step < prev : step <= prev;
                report.monotone_decrease = report.monotone_decrease && ok;
            }
            report.step_trace.push_back(step);
            ++report.iterations;
            x = std::move(next.point);
            keep(x);
            if (step < options.tol) {
                report.stop = StopReason::StepBelowTolerance;
                break;
            }
        }
        MapImage last = map.image(x);
        report.clamp_events += last.clamped ? 1 : 0;
        report.residual = space.distance(x, last.point);
        report.converged = report.stop == StopReason::StepBelowTolerance && report.residual <= options.tol_fp;
    } catch (const std::exception& e) {
        report.stop = StopReason::ApplyFailed;
        report.error = e.what();
        report.converged = false;
        report.residual = std::numeric_limits<double>::quiet_NaN();
    }
    report.fixed_point = std::move(x);
    return report;
}

UniquenessReport uniqueness_probe(const SelfMap& map, std::span<const Point> starts, const SolveOptions& options,
                                  double agreement_tol, std::size_t threads) {
    if (starts.size() < 2) throw std::invalid_argument("uniqueness probe needs at least two starts");
    UniquenessReport report;
    report.runs.resize(starts.size());
    parallel_for(starts.size(), threads, [&](std::size_t i) {
        try {
            report.runs[i] = picard_solve(map, starts[i], options);
        } catch (const std::exception& e) {
            report.runs[i].stop = StopReason::ApplyFailed;
            report.runs[i].error = e.what();
            report.runs[i].fixed_point = starts[i];
        }
    });

    const std::size_t n = starts.size();
    report.distances.assign(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!report.runs[i].converged) report.nonconvergent.push_back(i);
    }
    report.all_converged = report.nonconvergent.empty();
    report.agree = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!report.runs[i].converged) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (!report.runs[j].converged) continue;
            const double d = map.space().distance(report.runs[i].fixed_point, report.runs[j].fixed_point);
            report.distances[i][j] = d;
            report.max_pairwise = std::max(report.max_pairwise, d);
            if (d > agreement_tol) report.agree = false;
        }
    }
    report.unique = report.all_converged && report.agree;
    return report;
}

CauchyDiagnostic cauchy_diagnostic(const IndexDistance& distance, std::size_t prefix_length,
                                   std::span<const double> epsilon_grid) {
    if (prefix_length < 3) throw std::invalid_argument("cauchy diagnostic needs at least 3 terms");
    if (epsilon_grid.empty()) throw std::invalid_argument("epsilon grid must be nonempty");
    const std::size_t last = prefix_length - 1;
    CauchyDiagnostic diag;
    diag.tail_start = last / 2;
    diag.final_step = distance(last - 1, last);

    for (std::size_t n = diag.tail_start + 1; n <= last; ++n) {
        for (std::size_t m = n + 1; m <= last; ++m) diag.tail_diameter = std::max(diag.tail_diameter, distance(m, n));
    }

    for (double eps : epsilon_grid) {
        if (eps > 0.0 && diag.tail_diameter >= eps && (!diag.epsilon0 || eps > *diag.epsilon0)) diag.epsilon0 = eps;
    }
    diag.is_cauchy_within_budget = !diag.epsilon0.has_value();
    if (diag.is_cauchy_within_budget) return diag;

    const double eps = *diag.epsilon0;
    for (std::size_t s = 0; s < kWitnessSamples; ++s) {
        const std::size_t k = diag.tail_start * s / (kWitnessSamples - 1);
        if (!diag.witnesses.empty() && diag.witnesses.back().k == k) continue;
        bool found = false;
        for (std::size_t n = k + 1; n <= last && !found; ++n) {
            for (std::size_t m = n + 1; m <= last; ++m) {
                const double d = distance(m, n);
                if (d >= eps) {
                    diag.witnesses.push_back({k, m, n, d, distance(m - 1, n)});
                    found = true;
                    break;
                }
            }
        }
    }
    return diag;
}

CauchyDiagnostic cauchy_diagnostic(const SolveReport& report, const MetricSpace& space,
                                   std::span<const double> epsilon_grid) {
    const auto& pts = report.iterates;
    return cauchy_diagnostic([&](std::size_t i, std::size_t j) { return space.distance(pts[i], pts[j]); }, pts.size(),
                             epsilon_grid);
}

std::vector<double> default_epsilon_grid() { return {2.0, 1.0, 0.5, 0.25, 0.1, 0.05, 0.01, 0.005, 0.001}; }

}  // namespace fixpoint

#ifndef GMROI_DINKELBACH_HPP
#define GMROI_DINKELBACH_HPP

#include <optional>
#include <string>
#include <vector>

#include "gmroi/core.hpp"
#include "gmroi/solvers.hpp"

namespace gmroi {

struct DinkelbachConfig {
    // Stopping tolerance on W(lambda); unset selects 1e-9 * max(1, M(x_0)).
    std::optional<double> epsilon;
    int max_iterations = 50;
    double initial_lambda = 0.0;  // warm starts above the optimum are rejected
};

struct IterationTrace {
    double lambda = 0.0;
    double subproblem_value = 0.0;  // W(lambda)
    Selection selection;
    Aggregates aggregates;
    double subproblem_seconds = 0.0;
    std::optional<DualTrace> dual;  // present on the lagrangian path
};

struct SolveReport {
    double optimal_ratio = 0.0;  // GMROI of the final selection
    Selection selection;
    std::vector<IterationTrace> iterations;
    std::string solver_name;
    double total_seconds = 0.0;
    RegimeReport regime;
    bool feasible = false;
    double epsilon_used = 0.0;
};

// The outer fractional loop: solve W(lambda_k), stop once W < epsilon, else
// set lambda to the incumbent ratio. The reported ratio is the final
// selection's own GMROI, so report.optimal_ratio always reproduces
// aggregate(selection).gmroi exactly.
SolveReport solve_fractional(const Bucket& bucket, const DinkelbachConfig& cfg,
                             SubproblemSolver& solver);

struct CertificationResult {
    bool passed = true;
    std::vector<std::string> failures;  // "clause: detail" entries
};

// Post-hoc audit of a report: strictly increasing lambda trace, iteration
// count within the distinct-ratio bound on enumerable buckets, exact final
// feasibility, and W(lambda*) recomputed inside the stopping band.
CertificationResult certify(const SolveReport& report, const Bucket& bucket);

}  // namespace gmroi

#endif  // GMROI_DINKELBACH_HPP

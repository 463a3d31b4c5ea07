#include "gmroi/dinkelbach.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace gmroi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SolveReport solve_fractional(const Bucket& bucket, const DinkelbachConfig& cfg,
                             SubproblemSolver& solver) {
    bucket.validate();
    if (cfg.max_iterations < 1) {
        throw InvalidConfigError("max_iterations must be at least 1");
    }
    if (cfg.epsilon && !(*cfg.epsilon > 0.0)) {
        throw InvalidConfigError("epsilon must be positive");
    }

    const auto total_start = Clock::now();

    SolveReport report;
    report.solver_name = solver.name();
    report.regime = classify_regime(bucket);
    if (report.regime.regime == Regime::Infeasible) {
        throw InfeasibleError("no selection can meet the service floor");
    }

    double lambda = cfg.initial_lambda;
    double epsilon = cfg.epsilon.value_or(0.0);

    for (int k = 0;; ++k) {
        const auto sub_start = Clock::now();
        SubproblemOutcome outcome = solver.solve(bucket, lambda);
        const double sub_seconds = seconds_since(sub_start);

        const Aggregates agg = aggregate(bucket, outcome.selection);
        const double recomputed = agg.total_margin - lambda * agg.total_inventory;
        const double drift = std::fabs(outcome.value - recomputed);
        // Tolerance scales with the cancelled terms: near the zero crossing
        // the reduced value is a difference of two large sums.
        const double scale = std::max(
            1.0, agg.total_margin + std::fabs(lambda) * agg.total_inventory);
        if (drift > 1e-9 * scale) {
            throw SubproblemFailureError(
                "solver value " + fmt(outcome.value) +
                " disagrees with recomputed " + fmt(recomputed));
        }

        if (k == 0 && !cfg.epsilon) {
            epsilon = 1e-9 * std::max(1.0, agg.total_margin);
        }
        if (k == 0 && outcome.value < -epsilon) {
            throw InvalidWarmStartError(
                "W(lambda_0) = " + fmt(outcome.value) +
                " < 0; the starting ratio exceeds the optimum");
        }

        report.iterations.push_back({lambda, outcome.value, outcome.selection,
                                     agg, sub_seconds,
                                     std::move(outcome.dual)});

        if (outcome.value < epsilon) {
            report.selection = std::move(outcome.selection);
            report.optimal_ratio = agg.gmroi;
            break;
        }
        // W(lambda) >= epsilon > 0, so the ratio strictly increases.
        lambda = agg.gmroi;

        if (k + 1 >= cfg.max_iterations) {
            throw MaxIterationsError(
                "no convergence in " + std::to_string(cfg.max_iterations) +
                " iterations; epsilon may be below the float noise floor");
        }
    }

    report.epsilon_used = epsilon;
    report.feasible = selection_meets_floor(bucket, report.selection);
    report.total_seconds = seconds_since(total_start);
    return report;
}

CertificationResult certify(const SolveReport& report, const Bucket& bucket) {
    CertificationResult result;
    auto fail = [&result](const std::string& clause, const std::string& why) {
        result.passed = false;
        result.failures.push_back(clause + ": " + why);
    };

    if (report.iterations.empty()) {
        fail("trace", "report has no iterations");
        return result;
    }

    // (a) strictly increasing lambda trace
    for (std::size_t k = 1; k < report.iterations.size(); ++k) {
        if (!(report.iterations[k].lambda > report.iterations[k - 1].lambda)) {
            fail("lambda_monotonicity",
                 "lambda did not increase at iteration " + std::to_string(k));
            break;
        }
    }

    // (b) ratio updates bounded by the distinct feasible ratio count
    try {
        const auto ratios = feasible_ratio_set(bucket);
        const std::size_t updates = report.iterations.size() - 1;
        if (updates > ratios.size()) {
            fail("finite_termination",
                 std::to_string(updates) + " ratio updates exceed |R| = " +
                     std::to_string(ratios.size()));
        }
    } catch (const TooLargeError&) {
        // bucket not enumerable; clause skipped
    }

    // (c) exact feasibility of the final selection
    try {
        if (!selection_meets_floor(bucket, report.selection)) {
            fail("feasibility", "final selection violates the service floor");
        }
    } catch (const Error& e) {
        fail("feasibility", e.what());
    }

    // (d) W(lambda*) recomputed inside the stopping band
    try {
        SubproblemOutcome check;
        try {
            check = solve_exact(bucket, report.optimal_ratio);
        } catch (const BudgetOverflowError&) {
            check = solve_lagrangian(bucket, report.optimal_ratio);
        }
        if (!(check.value < report.epsilon_used)) {
            fail("terminal_value",
                 "W(lambda*) = " + fmt(check.value) + " is not below epsilon " +
                     fmt(report.epsilon_used));
        }
        double max_inventory = 0.0;
        for (const auto& sku : bucket.skus) {
            double hi = 0.0;
            for (const auto& s : sku.scenarios) hi = std::max(hi, s.inventory);
            max_inventory += hi;
        }
        const double band = report.epsilon_used *
                            (1.0 + std::fabs(report.optimal_ratio)) *
                            std::max(1.0, max_inventory);
        if (check.value < -band) {
            fail("terminal_value",
                 "W(lambda*) = " + fmt(check.value) +
                     " is below the tolerance band " + fmt(-band));
        }
    } catch (const Error& e) {
        fail("terminal_value", e.what());
    }

    return result;
}

}  // namespace gmroi

#ifndef GMROI_SOLVERS_HPP
#define GMROI_SOLVERS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmroi/core.hpp"

namespace gmroi {

// Reduced scores for one outer iteration: scores[i][j] = M_ij - lambda * I_ij.
struct ScoreMatrix {
    std::vector<std::vector<double>> scores;

    static ScoreMatrix compute(const Bucket& bucket, double lambda);
};

struct LagrangianConfig {
    // Bisection stops when the bracket width drops below this; a value <= 0
    // selects 1e-7 * (1 + n * max|W_ij|).
    double mu_tolerance = 0.0;
    double mu_initial_high = 1.0;
    int doubling_cap = 64;
};

struct DualTracePoint {
    double mu = 0.0;
    double induced_isp = 0.0;  // S(x(mu))
    double dual_value = 0.0;   // phi(mu)
};

struct DualTrace {
    std::vector<DualTracePoint> points;  // in evaluation order
    double mu_star = 0.0;                // effective multiplier at return
};

struct SubproblemOutcome {
    Selection selection;
    double value = 0.0;  // M(x) - lambda * I(x) of the returned selection
    std::optional<DualTrace> dual;
};

struct ExactSolverConfig {
    std::uint64_t state_cap = 100000000;    // DP states (n+1) * (budget+1)
    std::uint64_t enumeration_cap = 10000;  // product |J_i| for the fallback
};

// Per-SKU argmax of W_ij + (mu/n) * S_ij; ties go to the lowest index.
Selection enumerate_solve(const Bucket& bucket, double lambda, double mu);

// Algorithm: relax the service floor with multiplier mu, bracket by doubling
// mu until the induced selection is feasible, then bisect, keeping the best
// feasible selection seen. The returned value is the primal M(x) - lambda I(x)
// of that selection; the dual trace carries phi(mu) for gap audits.
SubproblemOutcome solve_lagrangian(const Bucket& bucket, double lambda,
                                   const LagrangianConfig& cfg = {});

// Separable per-SKU argmax of W_ij, ignoring the service floor.
SubproblemOutcome solve_unconstrained(const Bucket& bucket, double lambda);

// Exact constrained optimum via dynamic programming over the integer
// ISP-numerator budget (scenario rationals put on a common denominator).
// Falls back to exhaustive enumeration when no common denominator exists and
// the bucket is small; otherwise signals BudgetOverflow.
SubproblemOutcome solve_exact(const Bucket& bucket, double lambda,
                              const ExactSolverConfig& cfg = {});

struct BruteForceResult {
    Selection selection;
    double ratio = 0.0;
};

// Enumerates every selection, filters the floor exactly, maximizes M/I.
BruteForceResult brute_force_fractional(const Bucket& bucket,
                                        std::uint64_t cap = 1000000);

// Distinct feasible GMROI values, for the finite-termination bound.
std::vector<double> feasible_ratio_set(const Bucket& bucket,
                                       std::uint64_t cap = 10000);

// --- engine-facing solver contract -----------------------------------------

class SubproblemSolver {
public:
    virtual ~SubproblemSolver() = default;
    virtual const std::string& name() const = 0;
    // Must return a selection meeting the bucket's constraints (except the
    // unconstrained solver, by request) and its reduced value.
    virtual SubproblemOutcome solve(const Bucket& bucket, double lambda) = 0;
};

class ExactDpSolver final : public SubproblemSolver {
public:
    explicit ExactDpSolver(ExactSolverConfig cfg = {}) : cfg_(cfg) {}
    const std::string& name() const override { return name_; }
    SubproblemOutcome solve(const Bucket& bucket, double lambda) override {
        return solve_exact(bucket, lambda, cfg_);
    }

private:
    ExactSolverConfig cfg_;
    std::string name_ = "exact";
};

class LagrangianSolver final : public SubproblemSolver {
public:
    explicit LagrangianSolver(LagrangianConfig cfg = {}) : cfg_(cfg) {}
    const std::string& name() const override { return name_; }
    SubproblemOutcome solve(const Bucket& bucket, double lambda) override {
        return solve_lagrangian(bucket, lambda, cfg_);
    }

private:
    LagrangianConfig cfg_;
    std::string name_ = "lagrangian";
};

class UnconstrainedSolver final : public SubproblemSolver {
public:
    const std::string& name() const override { return name_; }
    SubproblemOutcome solve(const Bucket& bucket, double lambda) override {
        return solve_unconstrained(bucket, lambda);
    }

private:
    std::string name_ = "unconstrained";
};

// Regime dispatch: unconstrained buckets take the separable path, everything
// else the Lagrangian one.
class AutoSolver final : public SubproblemSolver {
public:
    explicit AutoSolver(LagrangianConfig cfg = {}) : cfg_(cfg) {}
    const std::string& name() const override { return name_; }
    SubproblemOutcome solve(const Bucket& bucket, double lambda) override;

private:
    LagrangianConfig cfg_;
    std::string name_ = "auto";
};

struct SolverOptions {
    LagrangianConfig lagrangian;
    ExactSolverConfig exact;
};

// Factory for the CLI names exact | lagrangian | unconstrained | auto.
std::unique_ptr<SubproblemSolver> make_solver(const std::string& name,
                                              const SolverOptions& opts = {});

}  // namespace gmroi

#endif  // GMROI_SOLVERS_HPP

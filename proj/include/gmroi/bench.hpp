#ifndef GMROI_BENCH_HPP
#define GMROI_BENCH_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmroi/dinkelbach.hpp"
#include "gmroi/io.hpp"
#include "gmroi/solvers.hpp"

namespace gmroi {

enum class BucketSource { SimulateFromConfig, LoadScenarioCsv };
enum class FloorRule { Explicit, Midpoint, BelowLowerBound };

struct ExperimentSpec {
    BucketSource bucket_source = BucketSource::SimulateFromConfig;
    std::string source_path;
    std::vector<std::string> solvers = {"exact", "lagrangian"};
    FloorRule floor_rule = FloorRule::Midpoint;
    double explicit_floor = 0.0;
    int sweep_points = 10;
    std::optional<std::uint64_t> seed;  // overrides the config seed
    bool apply_isotonic = true;
    bool warm_up = true;  // one discarded run per solver before timing
    std::string output_dir;  // consumed by the CLI; empty means stdout only
    SolverOptions solver_options;
    DinkelbachConfig dinkelbach;
};

struct SolverComparison {
    int iterations = 0;
    double wall_seconds = 0.0;
    double gmroi = 0.0;
    double realized_isp = 0.0;
    bool feasible = false;
    std::optional<double> tar_err_vs_exact;  // empty for the reference itself
    bool exact_marker = false;               // tar_err <= 1e-14
    std::optional<std::string> error;        // category, when the solver failed
};

struct ComparisonRow {
    std::string instance_label;  // {C|U}{skus:05}-{scenarios:07}
    double service_floor = 0.0;
    std::vector<std::pair<std::string, SolverComparison>> per_solver;
};

struct SweepCell {
    double wall_seconds = 0.0;
    double relative_gmroi = 0.0;  // realized / unconstrained optimum
    int iterations = 0;
    std::optional<std::string> error;
};

struct SweepRow {
    double normalized_tightness = 0.0;  // position of the floor in [S_min, S_max]
    double service_floor = 0.0;
    std::vector<std::pair<std::string, SweepCell>> per_solver;
};

// Threshold under which a solver's GMROI counts as exact.
inline constexpr double kExactMarkerThreshold = 1e-14;

Bucket obtain_bucket(const ExperimentSpec& spec);

// Floor selection; Midpoint and BelowLowerBound derive from the achievable
// ISP range in exact arithmetic.
double resolve_floor(const Bucket& bucket, FloorRule rule,
                     double explicit_value);

std::string instance_label(const Bucket& bucket);

// Runs every requested solver (the exact reference always runs) through the
// Dinkelbach engine on identical inputs and audits TAR_ERR per solver.
std::vector<ComparisonRow> run_compare(const ExperimentSpec& spec);

// Evenly spaced floors across [S_min, S_max - one ISP unit]; GMROI reported
// relative to the unconstrained optimum.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);

std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           const std::vector<std::string>& solver_order);
std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const std::vector<std::string>& solver_order);

std::string report_json(const SolveReport& report, const Bucket& bucket);

// All dual trace points of a report, as "mu,induced_isp,dual_value" rows.
std::string dual_trace_csv(const SolveReport& report);

}  // namespace gmroi

#endif  // GMROI_BENCH_HPP

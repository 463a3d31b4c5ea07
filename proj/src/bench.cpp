#include "gmroi/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "gmroi/isotonic.hpp"

namespace gmroi {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Achievable average-ISP bounds as exact rationals over n, with a float
// fallback mirror.
struct IspBounds {
    double lo = 0.0;  // mean of per-SKU minima (never above the true value)
    double hi = 0.0;  // mean of per-SKU maxima (never above the true value)
};

IspBounds achievable_bounds(const Bucket& bucket) {
    const auto n = bucket.skus.size();
    IspBounds b;
    if (const auto sums = achievable_isp_sums(bucket)) {
        const Rat lo = sums->first;
        const Rat hi = sums->second;
        // Divide by n on the denominator side.
        const unsigned __int128 lo_den =
            static_cast<unsigned __int128>(lo.den) * n;
        const unsigned __int128 hi_den =
            static_cast<unsigned __int128>(hi.den) * n;
        constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
        if (lo_den <= kMax && hi_den <= kMax) {
            b.lo = rat_to_double_le(
                Rat::make(lo.num, static_cast<std::uint64_t>(lo_den)));
            b.hi = rat_to_double_le(
                Rat::make(hi.num, static_cast<std::uint64_t>(hi_den)));
            return b;
        }
    }
    const auto regime = classify_regime(bucket);
    b.lo = regime.min_achievable_isp;
    b.hi = regime.max_achievable_isp;
    return b;
}

SolveReport run_one(const Bucket& bucket, const ExperimentSpec& spec,
                    const std::string& solver_name, bool warm_up) {
    const auto solver = make_solver(solver_name, spec.solver_options);
    if (warm_up) {
        auto discarded = solve_fractional(bucket, spec.dinkelbach, *solver);
        (void)discarded;
    }
    return solve_fractional(bucket, spec.dinkelbach, *solver);
}

}  // namespace

Bucket obtain_bucket(const ExperimentSpec& spec) {
    if (spec.bucket_source == BucketSource::LoadScenarioCsv) {
        Bucket bucket = ingest_scenarios(spec.source_path);
        if (spec.apply_isotonic) bucket = preprocess_bucket(bucket);
        return bucket;
    }
    const SimFileConfig cfg = parse_sim_config(spec.source_path);
    return simulate_from_config(cfg, spec.seed, spec.apply_isotonic);
}

double resolve_floor(const Bucket& bucket, FloorRule rule,
                     double explicit_value) {
    if (rule == FloorRule::Explicit) {
        if (!(explicit_value >= 0.0) || !(explicit_value <= 1.0)) {
            throw InvalidConfigError("explicit floor must lie in [0,1]");
        }
        return explicit_value;
    }
    const IspBounds bounds = achievable_bounds(bucket);
    if (rule == FloorRule::Midpoint) {
        return 0.5 * (bounds.lo + bounds.hi);
    }
    // One ISP-numerator unit below the guaranteed lower bound, floored at 0.
    return std::max(0.0, bounds.lo - isp_unit(bucket));
}

std::string instance_label(const Bucket& bucket) {
    const auto regime = classify_regime(bucket).regime;
    const char tag = regime == Regime::Unconstrained ? 'U' : 'C';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%05zu-%07zu", tag, bucket.sku_count(),
                  bucket.scenario_count());
    return buf;
}

std::vector<ComparisonRow> run_compare(const ExperimentSpec& spec) {
    Bucket bucket = obtain_bucket(spec);
    bucket.service_floor =
        resolve_floor(bucket, spec.floor_rule, spec.explicit_floor);
    if (classify_regime(bucket).regime == Regime::Infeasible) {
        throw InfeasibleError("bucket cannot meet the requested floor");
    }

    // The exact reference always runs; requested solvers keep their order.
    std::vector<std::string> order = spec.solvers;
    if (std::find(order.begin(), order.end(), "exact") == order.end()) {
        order.insert(order.begin(), "exact");
    }
    if (order.empty()) throw InvalidConfigError("no solvers requested");

    ComparisonRow row;
    row.instance_label = instance_label(bucket);
    row.service_floor = bucket.service_floor;

    std::optional<double> exact_gmroi;
    for (const auto& name : order) {
        SolverComparison cell;
        try {
            const SolveReport report = run_one(bucket, spec, name, spec.warm_up);
            cell.iterations = static_cast<int>(report.iterations.size());
            cell.wall_seconds = report.total_seconds;
            cell.gmroi = report.optimal_ratio;
            cell.realized_isp =
                aggregate(bucket, report.selection).avg_isp;
            cell.feasible = report.feasible;
            if (name == "exact") exact_gmroi = report.optimal_ratio;
        } catch (const Error& e) {
            cell.error = e.category();
        }
        row.per_solver.emplace_back(name, cell);
    }

    if (exact_gmroi) {
        for (auto& [name, cell] : row.per_solver) {
            if (cell.error) continue;
            const double err = tar_err(*exact_gmroi, cell.gmroi);
            cell.tar_err_vs_exact = err;
            cell.exact_marker = err <= kExactMarkerThreshold;
        }
    }
    return {row};
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
    if (spec.sweep_points < 2) {
        throw InvalidConfigError("sweep needs at least 2 points");
    }
    Bucket bucket = obtain_bucket(spec);
    const IspBounds bounds = achievable_bounds(bucket);
    const double lo = bounds.lo;
    const double hi = std::max(lo, bounds.hi - isp_unit(bucket));
    const double span = bounds.hi - bounds.lo;

    // Unconstrained optimum for normalization (also warms the process up).
    UnconstrainedSolver unconstrained;
    bucket.service_floor = 0.0;
    const SolveReport base =
        solve_fractional(bucket, spec.dinkelbach, unconstrained);
    const double base_gmroi = base.optimal_ratio;

    std::vector<SweepRow> rows;
    rows.reserve(spec.sweep_points);
    for (int p = 0; p < spec.sweep_points; ++p) {
        const double t = static_cast<double>(p) /
                         static_cast<double>(spec.sweep_points - 1);
        const double floor = lo + t * (hi - lo);
        SweepRow row;
        row.service_floor = floor;
        row.normalized_tightness = span > 0.0 ? (floor - lo) / span : 0.0;
        bucket.service_floor = floor;
        for (const auto& name : spec.solvers) {
            SweepCell cell;
            try {
                const SolveReport report =
                    run_one(bucket, spec, name, /*warm_up=*/false);
                cell.wall_seconds = report.total_seconds;
                cell.relative_gmroi = report.optimal_ratio / base_gmroi;
                cell.iterations = static_cast<int>(report.iterations.size());
            } catch (const Error& e) {
                cell.error = e.category();
            }
            row.per_solver.emplace_back(name, cell);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           const std::vector<std::string>& solver_order) {
    std::string out = "instance,service_floor";
    for (const auto& s : solver_order) {
        out += "," + s + "_iterations," + s + "_wall_seconds," + s + "_gmroi," +
               s + "_realized_isp," + s + "_feasible," + s + "_tar_err";
    }
    out += '\n';
    for (const auto& row : rows) {
        out += row.instance_label;
        out += ',';
        out += fmt17(row.service_floor);
        for (const auto& s : solver_order) {
            const auto it = std::find_if(
                row.per_solver.begin(), row.per_solver.end(),
                [&s](const auto& kv) { return kv.first == s; });
            if (it == row.per_solver.end()) {
                out += ",,,,,,";
                continue;
            }
            const SolverComparison& c = it->second;
            if (c.error) {
                out += ",,,,,," + *c.error;
                continue;
            }
            out += ',' + std::to_string(c.iterations);
            out += ',' + fmt17(c.wall_seconds);
            out += ',' + fmt17(c.gmroi);
            out += ',' + fmt17(c.realized_isp);
            out += c.feasible ? ",true" : ",false";
            if (!c.tar_err_vs_exact) {
                out += ",";
            } else if (c.exact_marker) {
                out += ",EXACT";
            } else {
                out += ',' + fmt17(*c.tar_err_vs_exact);
            }
        }
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const std::vector<std::string>& solver_order) {
    std::string out = "normalized_tightness,service_floor";
    for (const auto& s : solver_order) {
        out += "," + s + "_wall_seconds," + s + "_relative_gmroi," + s +
               "_iterations";
    }
    out += '\n';
    for (const auto& row : rows) {
        out += fmt17(row.normalized_tightness);
        out += ',';
        out += fmt17(row.service_floor);
        for (const auto& s : solver_order) {
            const auto it = std::find_if(
                row.per_solver.begin(), row.per_solver.end(),
                [&s](const auto& kv) { return kv.first == s; });
            if (it == row.per_solver.end() || it->second.error) {
                out += ",,,";
                if (it != row.per_solver.end() && it->second.error) {
                    out += *it->second.error;
                }
                continue;
            }
            out += ',' + fmt17(it->second.wall_seconds);
            out += ',' + fmt17(it->second.relative_gmroi);
            out += ',' + std::to_string(it->second.iterations);
        }
        out += '\n';
    }
    return out;
}

std::string report_json(const SolveReport& report, const Bucket& bucket) {
    nlohmann::json j;
    j["solver"] = report.solver_name;
    j["optimal_ratio"] = report.optimal_ratio;
    j["feasible"] = report.feasible;
    j["epsilon_used"] = report.epsilon_used;
    j["total_seconds"] = report.total_seconds;
    j["regime"] = {{"label", regime_name(report.regime.regime)},
                   {"min_achievable_isp", report.regime.min_achievable_isp},
                   {"max_achievable_isp", report.regime.max_achievable_isp}};
    j["bucket"] = {{"skus", bucket.sku_count()},
                   {"scenarios", bucket.scenario_count()},
                   {"service_floor", bucket.service_floor}};
    j["selection"] = report.selection.chosen;

    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : report.iterations) {
        nlohmann::json entry;
        entry["lambda"] = it.lambda;
        entry["subproblem_value"] = it.subproblem_value;
        entry["subproblem_seconds"] = it.subproblem_seconds;
        entry["total_margin"] = it.aggregates.total_margin;
        entry["total_inventory"] = it.aggregates.total_inventory;
        entry["avg_isp"] = it.aggregates.avg_isp;
        entry["gmroi"] = it.aggregates.gmroi;
        if (it.dual) {
            entry["mu_star"] = it.dual->mu_star;
            entry["dual_evaluations"] = it.dual->points.size();
        }
        iters.push_back(std::move(entry));
    }
    j["iterations"] = std::move(iters);
    return j.dump(2);
}

std::string dual_trace_csv(const SolveReport& report) {
    std::string out = "mu,induced_isp,dual_value\n";
    for (const auto& it : report.iterations) {
        if (!it.dual) continue;
        for (const auto& p : it.dual->points) {
            out += fmt17(p.mu);
            out += ',';
            out += fmt17(p.induced_isp);
            out += ',';
            out += fmt17(p.dual_value);
            out += '\n';
        }
    }
    return out;
}

}  // namespace gmroi

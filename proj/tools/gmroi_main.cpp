// gmroi: simulate scenario tables, solve bucket-level GMROI programs, and run
// the solver-comparison / constraint-tightness experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gmroi/bench.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gmroi;

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "."
                                                      : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << text;
}

struct CommonArgs {
    std::string scenarios_path;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool no_isotonic = false;
    std::string out_dir;
    std::string solver = "auto";
    std::vector<std::string> solvers;
    std::string floor_rule = "midpoint";
    std::optional<double> floor;
    double mu_tol = 0.0;
    std::uint64_t dp_state_cap = ExactSolverConfig{}.state_cap;
    int sweep_points = 10;
    bool no_warmup = false;
    std::string dual_trace_path;
};

void add_input_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenarios", args.scenarios_path,
                    "scenario-table CSV input");
    cmd->add_option("--config", args.config_path,
                    "simulation config (key = value)");
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_flag("--no-isotonic", args.no_isotonic,
                  "skip the isotonic preprocessing step");
}

void add_floor_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--floor", args.floor, "explicit service floor in [0,1]");
    cmd->add_option("--floor-rule", args.floor_rule,
                    "explicit | midpoint | below")
        ->check(CLI::IsMember({"explicit", "midpoint", "below"}));
}

void add_solver_tuning(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--mu-tol", args.mu_tol,
                    "bisection width tolerance (0 = auto)");
    cmd->add_option("--dp-state-cap", args.dp_state_cap,
                    "state cap for the exact DP");
}

ExperimentSpec build_spec(const CommonArgs& args) {
    ExperimentSpec spec;
    if (!args.scenarios_path.empty() && !args.config_path.empty()) {
        throw InvalidConfigError("give either --scenarios or --config");
    }
    if (!args.scenarios_path.empty()) {
        spec.bucket_source = BucketSource::LoadScenarioCsv;
        spec.source_path = args.scenarios_path;
    } else if (!args.config_path.empty()) {
        spec.bucket_source = BucketSource::SimulateFromConfig;
        spec.source_path = args.config_path;
    } else {
        throw InvalidConfigError("an input is required: --scenarios or --config");
    }
    spec.seed = args.seed;
    spec.apply_isotonic = !args.no_isotonic;
    spec.output_dir = args.out_dir;
    spec.solver_options.lagrangian.mu_tolerance = args.mu_tol;
    spec.solver_options.exact.state_cap = args.dp_state_cap;
    spec.sweep_points = args.sweep_points;
    spec.warm_up = !args.no_warmup;
    if (args.floor) {
        spec.floor_rule = FloorRule::Explicit;
        spec.explicit_floor = *args.floor;
    } else if (args.floor_rule == "explicit") {
        throw InvalidConfigError("--floor-rule explicit requires --floor");
    } else if (args.floor_rule == "below") {
        spec.floor_rule = FloorRule::BelowLowerBound;
    } else {
        spec.floor_rule = FloorRule::Midpoint;
    }
    if (!args.solvers.empty()) spec.solvers = args.solvers;
    return spec;
}

int cmd_simulate(const CommonArgs& args) {
    if (args.config_path.empty()) {
        throw InvalidConfigError("simulate requires --config");
    }
    const SimFileConfig cfg = parse_sim_config(args.config_path);
    const Bucket bucket =
        simulate_from_config(cfg, args.seed, !args.no_isotonic);
    const fs::path out =
        fs::path(args.out_dir.empty() ? "." : args.out_dir) / "scenarios.csv";
    write_text(out, scenario_csv(bucket));
    std::cout << "wrote " << out.string() << " (" << bucket.sku_count()
              << " SKUs, " << bucket.scenario_count() << " scenarios)\n";
    return 0;
}

int cmd_solve(const CommonArgs& args) {
    const ExperimentSpec spec = build_spec(args);
    Bucket bucket = obtain_bucket(spec);
    bucket.service_floor =
        resolve_floor(bucket, spec.floor_rule, spec.explicit_floor);

    const auto solver = make_solver(args.solver, spec.solver_options);
    const SolveReport report =
        solve_fractional(bucket, spec.dinkelbach, *solver);
    const std::string json = report_json(report, bucket);

    if (!args.out_dir.empty()) {
        write_text(fs::path(args.out_dir) / "report.json", json + "\n");
    }
    std::cout << json << "\n";
    if (!args.dual_trace_path.empty()) {
        write_text(args.dual_trace_path, dual_trace_csv(report));
    }
    return 0;
}

int cmd_compare(const CommonArgs& args) {
    const ExperimentSpec spec = build_spec(args);
    const auto rows = run_compare(spec);
    std::vector<std::string> order = spec.solvers;
    if (std::find(order.begin(), order.end(), "exact") == order.end()) {
        order.insert(order.begin(), "exact");
    }
    const std::string csv = comparison_csv(rows, order);
    if (!spec.output_dir.empty()) {
        write_text(fs::path(spec.output_dir) / "compare.csv", csv);
    }
    std::cout << csv;
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const ExperimentSpec spec = build_spec(args);
    const auto rows = run_sweep(spec);
    const std::string csv = sweep_csv(rows, spec.solvers);
    if (!spec.output_dir.empty()) {
        write_text(fs::path(spec.output_dir) / "sweep.csv", csv);
    }
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bucket-level GMROI optimization toolkit"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* simulate = app.add_subcommand(
        "simulate", "generate a scenario-table CSV from a simulation config");
    simulate->add_option("--config", args.config_path, "simulation config")
        ->required();
    simulate->add_option("--seed", args.seed, "override the config seed");
    simulate->add_flag("--no-isotonic", args.no_isotonic,
                       "skip isotonic preprocessing");
    simulate->add_option("--out", args.out_dir, "output directory");

    auto* solve = app.add_subcommand(
        "solve", "solve one bucket and emit a SolveReport as JSON");
    add_input_flags(solve, args);
    add_floor_flags(solve, args);
    add_solver_tuning(solve, args);
    solve->add_option("--solver", args.solver,
                      "exact | lagrangian | unconstrained | auto")
        ->check(CLI::IsMember({"exact", "lagrangian", "unconstrained", "auto"}));
    solve->add_option("--out", args.out_dir, "output directory");
    solve->add_option("--dual-trace", args.dual_trace_path,
                      "write the dual trace CSV here");

    auto* compare = app.add_subcommand(
        "compare", "run solvers on identical inputs and audit TAR_ERR");
    add_input_flags(compare, args);
    add_floor_flags(compare, args);
    add_solver_tuning(compare, args);
    compare->add_option("--solvers", args.solvers,
                        "subset of exact,lagrangian,unconstrained")
        ->delimiter(',');
    compare->add_flag("--no-warmup", args.no_warmup,
                      "skip the discarded warm-up run");
    compare->add_option("--out", args.out_dir, "output directory");

    auto* sweep = app.add_subcommand(
        "sweep", "vary the floor across the achievable range");
    add_input_flags(sweep, args);
    add_solver_tuning(sweep, args);
    sweep->add_option("--solvers", args.solvers,
                      "subset of exact,lagrangian,unconstrained")
        ->delimiter(',');
    sweep->add_option("--sweep-points", args.sweep_points,
                      "number of floor values (>= 2)");
    sweep->add_option("--out", args.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (solve->parsed()) return cmd_solve(args);
        if (compare->parsed()) return cmd_compare(args);
        if (sweep->parsed()) return cmd_sweep(args);
    } catch (const gmroi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "doctest.h"

#include <cmath>

#include "gmroi/dinkelbach.hpp"
#include "test_support.hpp"

using namespace gmroi;
using testsupport::make_bucket;
using testsupport::random_bucket;
using testsupport::running_example;

TEST_CASE("a forced selection converges in two solves") {
    const Bucket b = make_bucket({{{10, 4, 90, 100}}}, 0.0);
    ExactDpSolver solver;
    const SolveReport report = solve_fractional(b, {}, solver);
    CHECK(report.optimal_ratio == 2.5);
    CHECK(report.selection == Selection{{0}});
    REQUIRE(report.iterations.size() == 2);
    CHECK(report.iterations[0].lambda == 0.0);
    CHECK(report.iterations[0].subproblem_value == 10.0);
    CHECK(report.iterations[1].lambda == 2.5);
    CHECK(report.iterations[1].subproblem_value == doctest::Approx(0.0));
    CHECK(report.feasible);
}

TEST_CASE("the running example lands on 19/11 with either solver") {
    const Bucket b = running_example(0.9);
    for (const char* name : {"exact", "lagrangian", "auto"}) {
        auto solver = make_solver(name);
        const SolveReport report = solve_fractional(b, {}, *solver);
        CHECK(report.optimal_ratio ==
              doctest::Approx(19.0 / 11.0).epsilon(1e-12));
        CHECK(report.selection == Selection{{0, 1}});
        CHECK(report.feasible);
        CHECK(report.regime.regime == Regime::Constrained);

        const auto oracle = brute_force_fractional(b);
        CHECK(report.optimal_ratio ==
              doctest::Approx(oracle.ratio).epsilon(1e-12));
    }
}

TEST_CASE("the reported ratio reproduces the final selection's gmroi") {
    SplitMix64 rng(71);
    int solved = 0;
    for (int t = 0; t < 150 && solved < 80; ++t) {
        const Bucket b = random_bucket(rng);
        if (classify_regime(b).regime == Regime::Infeasible) continue;
        ExactDpSolver solver;
        const SolveReport report = solve_fractional(b, {}, solver);
        const double gmroi = aggregate(b, report.selection).gmroi;
        CHECK(std::fabs(report.optimal_ratio - gmroi) <=
              1e-12 * std::max(1.0, std::fabs(gmroi)));
        ++solved;
    }
    CHECK(solved >= 80);
}

TEST_CASE("all-zero margins stop immediately at ratio zero") {
    const Bucket b =
        make_bucket({{{0, 5, 90, 100}, {0, 8, 95, 100}}}, 0.5);
    ExactDpSolver solver;
    const SolveReport report = solve_fractional(b, {}, solver);
    CHECK(report.optimal_ratio == 0.0);
    CHECK(report.iterations.size() == 1);
}

TEST_CASE("infeasible buckets are rejected before solving") {
    const Bucket b = running_example(0.999);
    ExactDpSolver solver;
    CHECK_THROWS_AS(solve_fractional(b, {}, solver), InfeasibleError);
}

TEST_CASE("iteration caps and bad configs raise") {
    const Bucket b = running_example(0.9);
    ExactDpSolver solver;
    DinkelbachConfig cfg;
    cfg.max_iterations = 1;
    CHECK_THROWS_AS(solve_fractional(b, cfg, solver), MaxIterationsError);
    cfg = {};
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(solve_fractional(b, cfg, solver), InvalidConfigError);
    cfg = {};
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(solve_fractional(b, cfg, solver), InvalidConfigError);
}

TEST_CASE("warm starts below the optimum converge to the same ratio") {
    const Bucket b = running_example(0.9);
    ExactDpSolver solver;
    DinkelbachConfig cfg;
    cfg.initial_lambda = 1.0;  // below 19/11
    const SolveReport warm = solve_fractional(b, cfg, solver);
    CHECK(warm.optimal_ratio == doctest::Approx(19.0 / 11.0).epsilon(1e-12));

    cfg.initial_lambda = 5.0;  // above the optimum: W(lambda_0) < 0
    CHECK_THROWS_AS(solve_fractional(b, cfg, solver), InvalidWarmStartError);
}

TEST_CASE("a lying solver is caught by the value audit") {
    class LyingSolver final : public SubproblemSolver {
    public:
        const std::string& name() const override { return name_; }
        SubproblemOutcome solve(const Bucket& bucket, double lambda) override {
            auto out = solve_unconstrained(bucket, lambda);
            out.value += 1.0;
            return out;
        }

    private:
        std::string name_ = "lying";
    };
    const Bucket b = running_example(0.8);
    LyingSolver solver;
    CHECK_THROWS_AS(solve_fractional(b, {}, solver), SubproblemFailureError);
}

TEST_CASE("lambda trace rises strictly and stays below the oracle optimum") {
    SplitMix64 rng(73);
    int solved = 0;
    for (int t = 0; t < 200 && solved < 100; ++t) {
        const Bucket b = random_bucket(rng);
        if (classify_regime(b).regime == Regime::Infeasible) continue;
        ExactDpSolver solver;
        const SolveReport report = solve_fractional(b, {}, solver);
        const auto oracle = brute_force_fractional(b);
        for (std::size_t k = 1; k < report.iterations.size(); ++k) {
            CHECK(report.iterations[k].lambda >
                  report.iterations[k - 1].lambda);
            CHECK(report.iterations[k].lambda <=
                  oracle.ratio + 1e-9 * (1.0 + std::fabs(oracle.ratio)));
        }
        const auto cert = certify(report, b);
        CHECK(cert.passed);
        if (!cert.passed) {
            for (const auto& f : cert.failures) MESSAGE(f);
        }
        ++solved;
    }
    CHECK(solved >= 100);
}

TEST_CASE("ratio updates respect the distinct-ratio bound") {
    SplitMix64 rng(79);
    int solved = 0;
    for (int t = 0; t < 150 && solved < 60; ++t) {
        const Bucket b = random_bucket(rng, 6, 3);
        if (classify_regime(b).regime == Regime::Infeasible) continue;
        ExactDpSolver solver;
        const SolveReport report = solve_fractional(b, {}, solver);
        const auto ratios = feasible_ratio_set(b);
        CHECK(report.iterations.size() - 1 <= ratios.size());
        ++solved;
    }
    CHECK(solved >= 60);
}

TEST_CASE("certification passes clean reports") {
    const Bucket b = running_example(0.9);
    ExactDpSolver solver;
    const SolveReport report = solve_fractional(b, {}, solver);
    const auto cert = certify(report, b);
    CHECK(cert.passed);
    CHECK(cert.failures.empty());
}

TEST_CASE("certification names corrupted clauses") {
    const Bucket b = running_example(0.9);
    ExactDpSolver solver;
    const SolveReport clean = solve_fractional(b, {}, solver);

    SolveReport bad = clean;
    bad.selection = Selection{{0, 0}};  // isp 0.85 < 0.9
    auto cert = certify(bad, b);
    CHECK_FALSE(cert.passed);
    REQUIRE(!cert.failures.empty());
    bool named = false;
    for (const auto& f : cert.failures) {
        named = named || f.find("feasibility") != std::string::npos;
    }
    CHECK(named);

    bad = clean;
    bad.iterations.push_back(bad.iterations.back());  // stalls the trace
    cert = certify(bad, b);
    CHECK_FALSE(cert.passed);
    named = false;
    for (const auto& f : cert.failures) {
        named = named || f.find("lambda_monotonicity") != std::string::npos;
    }
    CHECK(named);

    bad = clean;
    bad.optimal_ratio = 1.0;  // W(1.0) is far above epsilon
    cert = certify(bad, b);
    CHECK_FALSE(cert.passed);
    named = false;
    for (const auto& f : cert.failures) {
        named = named || f.find("terminal_value") != std::string::npos;
    }
    CHECK(named);
}

TEST_CASE("unconstrained solver on a binding floor reports infeasible") {
    const Bucket b = running_example(0.9);
    UnconstrainedSolver solver;
    const SolveReport report = solve_fractional(b, {}, solver);
    CHECK_FALSE(report.feasible);  // (1,1)... the argmax path ignores the floor
    const auto cert = certify(report, b);
    CHECK_FALSE(cert.passed);
}

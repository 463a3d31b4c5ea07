#include "doctest.h"

#include <cmath>

#include "gmroi/core.hpp"
#include "test_support.hpp"

using namespace gmroi;
using testsupport::make_bucket;
using testsupport::random_bucket;

TEST_CASE("aggregate sums a single selected scenario") {
    const Bucket b = make_bucket({{{10, 4, 90, 100}}}, 0.0);
    const Aggregates agg = aggregate(b, {{0}});
    CHECK(agg.total_margin == 10.0);
    CHECK(agg.total_inventory == 4.0);
    CHECK(agg.avg_isp == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(agg.gmroi == 2.5);
}

TEST_CASE("aggregate matches the hand sum on two SKUs") {
    const Bucket b =
        make_bucket({{{10, 5, 90, 100}}, {{9, 6, 99, 100}}}, 0.0);
    const Aggregates agg = aggregate(b, {{0, 0}});
    CHECK(agg.total_margin == 19.0);
    CHECK(agg.total_inventory == 11.0);
    CHECK(agg.avg_isp == doctest::Approx(0.945).epsilon(1e-15));
    CHECK(agg.gmroi == doctest::Approx(19.0 / 11.0).epsilon(1e-15));

    // cross-check against the exhaustive evaluator
    const auto oracle = testsupport::oracle_best_ratio(b);
    CHECK(agg.gmroi == doctest::Approx(oracle.ratio).epsilon(1e-15));
}

TEST_CASE("zero margins yield zero gmroi for any selection") {
    const Bucket b =
        make_bucket({{{0, 5, 90, 100}, {0, 8, 95, 100}},
                     {{0, 4, 80, 100}, {0, 6, 99, 100}}},
                    0.0);
    testsupport::for_each_selection(b, [&](const Selection& sel) {
        CHECK(aggregate(b, sel).gmroi == 0.0);
    });
}

TEST_CASE("aggregate rejects zero total inventory") {
    const Bucket b = make_bucket({{{10, 0, 90, 100}}}, 0.0);
    CHECK_THROWS_AS(aggregate(b, {{0}}), ZeroInventoryError);
}

TEST_CASE("aggregate rejects misaligned selections") {
    const Bucket b = make_bucket({{{10, 4, 90, 100}}}, 0.0);
    CHECK_THROWS_AS(aggregate(b, {{0, 0}}), ValidationError);
    CHECK_THROWS_AS(aggregate(b, {{1}}), ValidationError);
}

TEST_CASE("regime: floor below every achievable value") {
    Bucket b = make_bucket({{{1, 1, 1, 1}, {2, 2, 1, 1}}}, 0.95);
    const auto report = classify_regime(b);
    CHECK(report.regime == Regime::Unconstrained);
    CHECK(report.min_achievable_isp == 1.0);
}

TEST_CASE("regime: infeasible and constrained match enumeration") {
    // per-SKU ISP ranges [0.5, 0.9] and [0.6, 0.8]
    Bucket b = make_bucket(
        {{{1, 1, 5, 10}, {1, 1, 9, 10}}, {{1, 1, 6, 10}, {1, 1, 8, 10}}}, 0.99);
    auto report = classify_regime(b);
    CHECK(report.regime == Regime::Infeasible);
    CHECK(report.max_achievable_isp == doctest::Approx(0.85).epsilon(1e-15));

    bool any_feasible = false;
    testsupport::for_each_selection(b, [&](const Selection& sel) {
        any_feasible = any_feasible || testsupport::oracle_feasible(b, sel);
    });
    CHECK_FALSE(any_feasible);

    b.service_floor = 0.8;
    report = classify_regime(b);
    CHECK(report.regime == Regime::Constrained);
    CHECK(report.min_achievable_isp == doctest::Approx(0.55).epsilon(1e-15));
}

TEST_CASE("regime label agrees with enumeration on random buckets") {
    SplitMix64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const Bucket b = random_bucket(rng);
        const auto regime = classify_regime(b).regime;
        bool any = false, all = true;
        testsupport::for_each_selection(b, [&](const Selection& sel) {
            const bool ok = selection_meets_floor(b, sel);
            any = any || ok;
            all = all && ok;
        });
        CHECK((regime != Regime::Infeasible) == any);
        if (regime == Regime::Unconstrained) CHECK(all);
    }
}

TEST_CASE("tar_err matches the clamped formula") {
    CHECK(tar_err(2.0, 2.0) == 0.0);
    CHECK(tar_err(0.5, 0.4) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(tar_err(4.0, 3.8) == doctest::Approx(0.05).epsilon(1e-12));
    SplitMix64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const double a = 10.0 * rng.uniform01();
        const double d = rng.uniform01();
        CHECK(tar_err(a, a) == 0.0);
        CHECK(tar_err(a, a + d) == doctest::Approx(tar_err(a, a - d)));
    }
}

TEST_CASE("selection stats stay inside their ranges") {
    SplitMix64 rng(17);
    for (int t = 0; t < 100; ++t) {
        const Bucket b = random_bucket(rng);
        testsupport::for_each_selection(b, [&](const Selection& sel) {
            const Aggregates agg = aggregate(b, sel);
            CHECK(agg.avg_isp >= 0.0);
            CHECK(agg.avg_isp <= 1.0 + 1e-12);
            CHECK(agg.total_margin >= 0.0);
            CHECK(agg.total_inventory >= 0.0);
        });
    }
}

TEST_CASE("gmroi is scale covariant in the margins") {
    SplitMix64 rng(23);
    for (int t = 0; t < 50; ++t) {
        const Bucket b = random_bucket(rng);
        Bucket scaled = b;
        for (auto& sku : scaled.skus) {
            for (auto& s : sku.scenarios) s.margin *= 2.0;
        }
        const auto base = testsupport::oracle_best_ratio(b);
        const auto twice = testsupport::oracle_best_ratio(scaled);
        if (!base.feasible) {
            CHECK_FALSE(twice.feasible);
            continue;
        }
        CHECK(twice.selection == base.selection);  // doubling is exact
        CHECK(twice.ratio == 2.0 * base.ratio);
    }
}

TEST_CASE("validation names structural defects") {
    Bucket empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);

    Bucket b = make_bucket({{{1, 1, 5, 10}}}, 0.5);
    b.skus[0].scenarios[0].isp_num = 11;
    CHECK_THROWS_AS(b.validate(), ValidationError);

    b = make_bucket({{{1, 1, 5, 10}}}, 1.5);
    CHECK_THROWS_AS(b.validate(), ValidationError);

    b = make_bucket({{{1, -1, 5, 10}}}, 0.5);
    CHECK_THROWS_AS(b.validate(), ValidationError);
}

TEST_CASE("exact floor checks do not flap at the boundary") {
    // avg isp exactly 0.85, floor exactly 17/20
    Bucket b = make_bucket({{{1, 1, 9, 10}}, {{1, 1, 8, 10}}}, 0.85);
    CHECK(selection_meets_floor(b, {{0, 0}}));
    b.service_floor = std::nextafter(0.85, 1.0);
    CHECK_FALSE(selection_meets_floor(b, {{0, 0}}));
}

TEST_CASE("isp_unit reflects the common denominator") {
    const Bucket b = make_bucket({{{1, 1, 5, 10}}, {{1, 1, 3, 4}}}, 0.5);
    CHECK(isp_unit(b) == doctest::Approx(1.0 / (2 * 20)).epsilon(1e-15));
}

TEST_CASE("float-only metrics are rationalized and flagged") {
    const auto m = ScenarioMetrics::from_float_isp(5.0, 2.0, 0.87654321, 3);
    CHECK(m.isp_rationalized);
    CHECK(m.isp_den == 1000000);
    CHECK(m.isp == doctest::Approx(0.87654321).epsilon(1e-6));
    CHECK(m.isp == static_cast<double>(m.isp_num) / 1e6);
}

#ifndef GMROI_CORE_HPP
#define GMROI_CORE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmroi/errors.hpp"
#include "gmroi/rational.hpp"

namespace gmroi {

// Float comparisons against the service floor fall back to this tolerance
// when the exact rational path overflows.
inline constexpr double kIspFloatTolerance = 1e-9;

// One simulated operating point of a SKU at a fixed safety-stock level.
// `isp` mirrors `isp_num / isp_den`; the rational form is what feasibility
// decisions use. `isp_rationalized` marks values that were rounded into
// rational form (denominator 1e6) instead of coming from the simulator.
struct ScenarioMetrics {
    double margin = 0.0;     // gross margin dollars over the horizon
    double inventory = 0.0;  // time-average inventory investment dollars
    double isp = 0.0;        // in-stock percentage in [0,1]
    std::int64_t safety_stock = 0;
    std::uint64_t isp_num = 0;
    std::uint64_t isp_den = 1;
    bool isp_rationalized = false;

    Rat isp_rat() const { return Rat{isp_num, isp_den}; }

    // For metrics that only exist as a float; rounds at denominator 1e6.
    static ScenarioMetrics from_float_isp(double margin, double inventory,
                                          double isp,
                                          std::int64_t safety_stock = 0);

    friend bool operator==(const ScenarioMetrics&,
                           const ScenarioMetrics&) = default;
};

struct SkuScenarios {
    std::string sku_id;
    std::vector<ScenarioMetrics> scenarios;  // ordered by safety stock

    friend bool operator==(const SkuScenarios&, const SkuScenarios&) = default;
};

// The planning unit: n SKUs solved jointly under one in-stock floor.
struct Bucket {
    std::vector<SkuScenarios> skus;
    double service_floor = 0.0;  // required average ISP, in [0,1]

    std::size_t sku_count() const { return skus.size(); }
    std::size_t scenario_count() const;

    // Structural invariants; throws ValidationError naming the violation.
    void validate() const;

    friend bool operator==(const Bucket&, const Bucket&) = default;
};

// One chosen scenario index per SKU, aligned with Bucket::skus.
struct Selection {
    std::vector<std::int32_t> chosen;

    friend bool operator==(const Selection&, const Selection&) = default;
};

struct Aggregates {
    double total_margin = 0.0;
    double total_inventory = 0.0;
    double avg_isp = 0.0;
    double gmroi = 0.0;  // total_margin / total_inventory
};

enum class Regime { Unconstrained, Constrained, Infeasible };

const char* regime_name(Regime r);

struct RegimeReport {
    double min_achievable_isp = 0.0;  // mean of per-SKU scenario minima
    double max_achievable_isp = 0.0;  // mean of per-SKU scenario maxima
    Regime regime = Regime::Unconstrained;
};

// Sums selected margins/inventories and averages selected ISPs.
// Throws ZeroInventoryError when the selected inventory total is zero.
Aggregates aggregate(const Bucket& bucket, const Selection& sel);

// Regime by the achievable ISP range: the floor never binds, can bind, or
// can never be met. Infeasible is a reported state, not an error.
RegimeReport classify_regime(const Bucket& bucket);

// Relative GMROI deviation with the denominator clamped at 1.
double tar_err(double exact_gmroi, double solver_gmroi);

// --- exact service arithmetic -------------------------------------------

// Sum of selected ISP rationals; nullopt if the exact sum overflows u64.
std::optional<Rat> selection_isp_sum(const Bucket& bucket,
                                     const Selection& sel);

// Exact test of sum(S_i) >= n * floor, with a documented float fallback
// (tolerance kIspFloatTolerance) when rational arithmetic overflows.
bool selection_meets_floor(const Bucket& bucket, const Selection& sel);
bool isp_sum_meets_floor(const std::optional<Rat>& sum, double avg_isp,
                         double floor, std::uint64_t n);

// Sums over per-SKU scenario minima and maxima (exact), when representable.
std::optional<std::pair<Rat, Rat>> achievable_isp_sums(const Bucket& bucket);

// lcm of all isp denominators, when it fits u64.
std::optional<std::uint64_t> common_isp_denominator(const Bucket& bucket);

// Size of one ISP-numerator step in bucket-average units: 1 / (n * lcm).
// Falls back to kIspFloatTolerance when no common denominator exists.
double isp_unit(const Bucket& bucket);

}  // namespace gmroi

#endif  // GMROI_CORE_HPP

#ifndef GMROI_SIMULATE_HPP
#define GMROI_SIMULATE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "gmroi/core.hpp"

namespace gmroi {

// Dispersion at or above this value switches the demand draw from negative
// binomial to a constant round(demand_mean) per period.
inline constexpr double kDeterministicDispersion = 1e6;

enum class ReviewPolicy { Continuous };       // periodic review reserved
enum class OrderQuantityRule { OrderUpTo };

struct SimConfig {
    std::int64_t horizon = 0;        // periods; must be >= lead_time + 1
    double demand_mean = 0.0;        // units per period
    double demand_dispersion = 1.0;  // negative-binomial shape
    std::int64_t lead_time = 1;      // periods
    double unit_price = 0.0;
    double unit_cost = 0.0;          // cost above price yields negative margin
    ReviewPolicy review = ReviewPolicy::Continuous;
    OrderQuantityRule order_quantity_rule = OrderQuantityRule::OrderUpTo;
    std::uint64_t seed = 0;

    void validate() const;  // throws InvalidConfigError
};

struct ScenarioGrid {
    std::vector<std::int64_t> safety_stocks;  // strictly increasing, >= 0

    void validate() const;
};

// Per-period record of one simulated run. `on_hand` is the end-of-period
// level (post demand); orders are (placement period, quantity) pairs that
// arrive at the start of period `placement + lead_time`.
struct Trajectory {
    std::vector<std::int64_t> demand;
    std::vector<std::int64_t> units_sold;
    std::vector<std::int64_t> on_hand;
    std::vector<bool> in_stock_flag;  // true when no demand was lost
    std::vector<std::pair<std::int64_t, std::int64_t>> orders_placed;
};

// --- deterministic RNG (splitmix64) ---------------------------------------

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform01() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Stream seed for one (seed, stream index) pair. Streams are decorrelated by
// hashing; stream 0 of a replication run is the base seed itself so a
// single-replication run reproduces simulate_sku exactly.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication);

// Negative-binomial demand draw (gamma-Poisson mixture); degenerates to
// round(mean) when dispersion >= kDeterministicDispersion.
std::int64_t draw_demand(SplitMix64& rng, double mean, double dispersion);

// --- simulation ------------------------------------------------------------

// Lost-sales reorder-point run over cfg.horizon periods:
//   reorder point  R = safety_stock + round(mean * lead_time)
//   order-up-to    S = R + round(mean * lead_time); initial on-hand is S
//   one order outstanding at a time, placed after demand when the inventory
//   position (on hand + on order) has dropped to R or below.
// Margin counts units sold at (price - cost); inventory investment is the
// time average of end-of-period on-hand valued at cost; a period is in stock
// when all of its demand was served.
std::pair<Trajectory, ScenarioMetrics> simulate_sku(const SimConfig& cfg,
                                                    std::int64_t safety_stock);

// One ScenarioMetrics per grid level: margin and inventory averaged over
// replications, ISP numerator/denominator summed. Replication r runs with
// replication_seed(cfg.seed, r); demand streams do not depend on the grid
// level, so scenarios of one SKU see common demand paths.
SkuScenarios generate_scenarios(const SimConfig& cfg, const ScenarioGrid& grid,
                                std::int64_t replications,
                                const std::string& sku_id = "");

// Assembles a bucket from per-SKU generation; SKUs keep input order and get
// sequential ids (sku00001, ...) when none is supplied.
Bucket generate_bucket(const std::vector<SimConfig>& cfgs,
                       const std::vector<ScenarioGrid>& grids,
                       double service_floor, std::int64_t replications);

// Safety stocks 0 .. ceil(4 * mean * lead_time), stepped to give about
// `points` levels.
ScenarioGrid default_grid(const SimConfig& cfg, std::int64_t points = 60);

}  // namespace gmroi

#endif  // GMROI_SIMULATE_HPP

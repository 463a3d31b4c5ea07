#include "gmroi/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gmroi {

void SimConfig::validate() const {
    if (horizon < 1) throw InvalidConfigError("horizon must be positive");
    if (lead_time < 1) throw InvalidConfigError("lead_time must be positive");
    if (horizon < lead_time + 1) {
        throw InvalidConfigError("horizon must be at least lead_time + 1");
    }
    if (!(demand_mean >= 0.0) || !std::isfinite(demand_mean)) {
        throw InvalidConfigError("demand_mean must be nonnegative");
    }
    if (!(demand_dispersion > 0.0)) {
        throw InvalidConfigError("demand_dispersion must be positive");
    }
    if (!(unit_price >= 0.0) || !(unit_cost >= 0.0)) {
        throw InvalidConfigError("unit price and cost must be nonnegative");
    }
}

void ScenarioGrid::validate() const {
    if (safety_stocks.empty()) {
        throw InvalidConfigError("scenario grid is empty");
    }
    for (std::size_t i = 0; i < safety_stocks.size(); ++i) {
        if (safety_stocks[i] < 0) {
            throw InvalidConfigError("safety stocks must be nonnegative");
        }
        if (i > 0 && safety_stocks[i] <= safety_stocks[i - 1]) {
            throw InvalidConfigError("safety stocks must be strictly increasing");
        }
    }
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0xA0761D6478BD642Full * (stream + 1)));
    return g.next();
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication) {
    if (replication == 0) return seed;
    return derive_stream_seed(seed, replication);
}

namespace {

double draw_exponential(SplitMix64& rng) {
    return -std::log(1.0 - rng.uniform01());
}

double draw_normal(SplitMix64& rng) {
    const double u1 = 1.0 - rng.uniform01();  // (0, 1]
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643 * u2);
}

// Marsaglia-Tsang; the shape < 1 case boosts through shape + 1.
double draw_gamma(SplitMix64& rng, double shape, double scale) {
    if (shape < 1.0) {
        const double u = 1.0 - rng.uniform01();
        return draw_gamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = draw_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v * scale;
        }
    }
}

// Counts unit-rate exponential arrivals up to `lambda`; O(lambda) but free of
// the underflow the product form hits at large rates.
std::int64_t draw_poisson(SplitMix64& rng, double lambda) {
    if (lambda <= 0.0) return 0;
    std::int64_t count = 0;
    double t = draw_exponential(rng);
    while (t <= lambda) {
        ++count;
        t += draw_exponential(rng);
    }
    return count;
}

}  // namespace

std::int64_t draw_demand(SplitMix64& rng, double mean, double dispersion) {
    if (mean <= 0.0) return 0;
    if (dispersion >= kDeterministicDispersion) return std::llround(mean);
    const double rate = draw_gamma(rng, dispersion, mean / dispersion);
    return draw_poisson(rng, rate);
}

std::pair<Trajectory, ScenarioMetrics> simulate_sku(const SimConfig& cfg,
                                                    std::int64_t safety_stock) {
    cfg.validate();
    if (safety_stock < 0) {
        throw InvalidConfigError("safety stock must be nonnegative");
    }

    const std::int64_t lead_demand =
        std::llround(cfg.demand_mean * static_cast<double>(cfg.lead_time));
    const std::int64_t reorder_point = safety_stock + lead_demand;
    const std::int64_t order_up_to = reorder_point + lead_demand;

    Trajectory traj;
    traj.demand.resize(cfg.horizon);
    traj.units_sold.resize(cfg.horizon);
    traj.on_hand.resize(cfg.horizon);
    traj.in_stock_flag.resize(cfg.horizon);

    std::vector<std::int64_t> arrivals(cfg.horizon + cfg.lead_time + 1, 0);
    SplitMix64 rng(cfg.seed);

    std::int64_t on_hand = order_up_to;
    std::int64_t on_order = 0;
    std::int64_t units_sold_total = 0;
    std::int64_t on_hand_sum = 0;
    std::uint64_t in_stock_periods = 0;

    for (std::int64_t t = 0; t < cfg.horizon; ++t) {
        on_hand += arrivals[t];
        on_order -= arrivals[t];

        const std::int64_t demand =
            draw_demand(rng, cfg.demand_mean, cfg.demand_dispersion);
        const std::int64_t sold = std::min(demand, on_hand);
        on_hand -= sold;

        traj.demand[t] = demand;
        traj.units_sold[t] = sold;
        traj.in_stock_flag[t] = (sold == demand);
        if (traj.in_stock_flag[t]) ++in_stock_periods;

        const std::int64_t position = on_hand + on_order;
        if (position <= reorder_point && on_order == 0) {
            const std::int64_t qty = order_up_to - position;
            if (qty > 0) {
                arrivals[t + cfg.lead_time] += qty;
                on_order += qty;
                traj.orders_placed.emplace_back(t, qty);
            }
        }

        traj.on_hand[t] = on_hand;
        on_hand_sum += on_hand;
        units_sold_total += sold;
    }

    ScenarioMetrics metrics;
    metrics.safety_stock = safety_stock;
    metrics.margin = static_cast<double>(units_sold_total) *
                     (cfg.unit_price - cfg.unit_cost);
    metrics.inventory = static_cast<double>(on_hand_sum) /
                        static_cast<double>(cfg.horizon) * cfg.unit_cost;
    metrics.isp_num = in_stock_periods;
    metrics.isp_den = static_cast<std::uint64_t>(cfg.horizon);
    metrics.isp = static_cast<double>(metrics.isp_num) /
                  static_cast<double>(metrics.isp_den);
    return {std::move(traj), metrics};
}

SkuScenarios generate_scenarios(const SimConfig& cfg, const ScenarioGrid& grid,
                                std::int64_t replications,
                                const std::string& sku_id) {
    cfg.validate();
    grid.validate();
    if (replications < 1) {
        throw InvalidConfigError("replications must be at least 1");
    }

    SkuScenarios sku;
    sku.sku_id = sku_id;
    sku.scenarios.reserve(grid.safety_stocks.size());
    for (const std::int64_t level : grid.safety_stocks) {
        double margin_sum = 0.0;
        double inventory_sum = 0.0;
        std::uint64_t isp_num = 0;
        std::uint64_t isp_den = 0;
        for (std::int64_t r = 0; r < replications; ++r) {
            SimConfig rep_cfg = cfg;
            rep_cfg.seed = replication_seed(cfg.seed, r);
            const auto [traj, m] = simulate_sku(rep_cfg, level);
            margin_sum += m.margin;
            inventory_sum += m.inventory;
            isp_num += m.isp_num;
            isp_den += m.isp_den;
        }
        ScenarioMetrics m;
        m.safety_stock = level;
        m.margin = margin_sum / static_cast<double>(replications);
        m.inventory = inventory_sum / static_cast<double>(replications);
        m.isp_num = isp_num;
        m.isp_den = isp_den;
        m.isp = static_cast<double>(isp_num) / static_cast<double>(isp_den);
        sku.scenarios.push_back(m);
    }
    return sku;
}

Bucket generate_bucket(const std::vector<SimConfig>& cfgs,
                       const std::vector<ScenarioGrid>& grids,
                       double service_floor, std::int64_t replications) {
    if (cfgs.empty()) throw InvalidConfigError("no SKU configs supplied");
    if (cfgs.size() != grids.size()) {
        throw InvalidConfigError("configs and grids must align");
    }
    Bucket bucket;
    bucket.service_floor = service_floor;
    bucket.skus.reserve(cfgs.size());
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        char id[16];
        std::snprintf(id, sizeof(id), "sku%05zu", i + 1);
        bucket.skus.push_back(
            generate_scenarios(cfgs[i], grids[i], replications, id));
    }
    bucket.validate();
    return bucket;
}

ScenarioGrid default_grid(const SimConfig& cfg, std::int64_t points) {
    if (points < 1) throw InvalidConfigError("grid points must be positive");
    const auto hi = static_cast<std::int64_t>(
        std::ceil(4.0 * cfg.demand_mean * static_cast<double>(cfg.lead_time)));
    ScenarioGrid grid;
    if (hi <= 0 || points == 1) {
        grid.safety_stocks = {0};
        return grid;
    }
    const std::int64_t step = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(hi) /
                        static_cast<double>(points - 1)));
    for (std::int64_t level = 0; level <= hi; level += step) {
        grid.safety_stocks.push_back(level);
    }
    if (grid.safety_stocks.back() != hi) grid.safety_stocks.push_back(hi);
    return grid;
}

}  // namespace gmroi
